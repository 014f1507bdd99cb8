from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import spinor_oracle as oracle
from gchyper import linalg as la
from gchyper.gcs import (TwoForm, b_transform, beta_transform, from_complex,
                         from_symplectic, pairing, split_structure, standard_complex,
                         standard_symplectic, type_of)
from gchyper.spinor import (CliffordElement, MixedForm, NoCanonicalLine, annihilator,
                            beta_on_spinor, canonical_line, clifford_act, exp_i_omega,
                            exp_two_form, is_pure, mukai_pairing, spinor_type)
from randgen import random_bivector, random_structure, random_two_form, small_rational

I = la.IMAG


def random_form(rng, m: int, density: float = 0.5) -> MixedForm:
    c = [la.GaussRational(small_rational(rng), small_rational(rng)) if rng.random() < density
         else la.GaussRational(0) for _ in range(1 << m)]
    return MixedForm(m, np.array(c, dtype=object))


def random_element(rng, m: int) -> np.ndarray:
    return la.exact_complex([la.GaussRational(small_rational(rng), small_rational(rng))
                             for _ in range(2 * m)])


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([1, 2, 3, 4]))
def test_clifford_action_matches_oracle(seed, m):
    rng = np.random.default_rng(seed)
    rho = random_form(rng, m)
    v = random_element(rng, m)
    got = oracle.from_mixed(clifford_act(v, rho))
    want = oracle.act([oracle.to_sym(x) for x in v[:m]], [oracle.to_sym(x) for x in v[m:]],
                      oracle.from_mixed(rho))
    assert got == want


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([1, 2, 3, 4]))
def test_clifford_relation(seed, m):
    rng = np.random.default_rng(seed)
    rho = random_form(rng, m)
    u, v = random_element(rng, m), random_element(rng, m)
    uv = clifford_act(u, clifford_act(v, rho))
    vu = clifford_act(v, clifford_act(u, rho))
    assert (uv + vu).coeffs.tolist() == rho.scale(2 * pairing(u, v)).coeffs.tolist()


def test_wedge_sign_convention():
    rho = MixedForm.from_terms(3, {(0, 2): 1})
    e1 = CliffordElement(la.exact([0, 0, 0]), la.exact([0, 1, 0]))
    assert dict(clifford_act(e1, rho).terms()) == {(0, 1, 2): -1}
    x2 = CliffordElement(la.exact([0, 0, 1]), la.exact([0, 0, 0]))
    assert dict(clifford_act(x2, rho).terms()) == {(0,): -1}


def test_exp_i_omega_on_the_plane():
    rho = exp_i_omega(standard_symplectic(2))
    assert dict(rho.terms()) == {(): 1, (0, 1): I}
    assert mukai_pairing(rho, rho.conjugate()) == la.GaussRational(0, -2)


def test_mukai_for_a_complex_line():
    rho = canonical_line(from_complex(standard_complex(2)))
    assert rho.support_degrees() == [1]
    assert mukai_pairing(rho, rho.conjugate()) == la.GaussRational(0, 2)


def test_exp_two_form_matches_series():
    b = TwoForm.from_terms(4, {(0, 1): 2, (2, 3): Fraction(1, 3)})
    one = MixedForm.from_terms(4, {(): 1})
    got = dict(exp_two_form(b, one).terms())
    assert got == {(): 1, (0, 1): 2, (2, 3): Fraction(1, 3), (0, 1, 2, 3): Fraction(2, 3)}


@pytest.mark.parametrize("m", [2, 4])
def test_canonical_lines_of_standard_structures(m):
    w = standard_symplectic(m)
    assert canonical_line(from_symplectic(w)).proportional_to(exp_i_omega(w))
    rho = canonical_line(from_complex(standard_complex(m)))
    assert rho.support_degrees() == [m // 2]


def test_b_transform_acts_by_exp_minus_b():
    w = standard_symplectic(4)
    s = from_symplectic(w)
    b = TwoForm.from_terms(4, {(0, 2): 1, (1, 3): Fraction(1, 2), (0, 1): 3})
    rho = canonical_line(s)
    moved = canonical_line(b_transform(s, b))
    assert moved.proportional_to(exp_two_form(b, rho, -1))
    assert not moved.proportional_to(exp_two_form(b, rho, 1))


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from([2, 4]))
def test_beta_transform_acts_by_contraction(seed, m):
    rng = np.random.default_rng(seed)
    s = random_structure(rng, m, beta=False)
    beta = random_bivector(rng, m)
    rho = canonical_line(s)
    assert canonical_line(beta_transform(s, beta)).proportional_to(beta_on_spinor(beta, rho))


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([2, 4]))
def test_canonical_line_matches_linear_system_oracle(seed, m):
    rng = np.random.default_rng(seed)
    s = random_structure(rng, m)
    want = oracle.pure_spinor_by_solving(s.mat, m)
    got = oracle.from_mixed(canonical_line(s))
    assert oracle.proportional(got, want)
    assert oracle.lowest_degree(want) == type_of(s) == spinor_type(s)


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([1, 2, 3]))
def test_purity_matches_oracle(seed, m):
    rng = np.random.default_rng(seed)
    rho = random_form(rng, m, density=0.3)
    if rho.is_zero():
        return
    dim = oracle.annihilator_dim(oracle.from_mixed(rho), m)
    assert len(annihilator(rho)) == dim
    assert is_pure(rho) == (dim == m)


def test_purity_examples():
    # 1 + e^{1234} has a trivial annihilator
    rho = MixedForm.from_terms(4, {(): 1, (0, 1, 2, 3): 1})
    assert annihilator(rho) == [] and not is_pure(rho)
    # e^1 + e^{123} = exp(e^{23}) ^ e^1 is pure
    assert is_pure(MixedForm.from_terms(3, {(0,): 1, (0, 1, 2): 1}))
    rho = MixedForm.from_terms(4, {(0,): 1, (0, 1, 2): 1})
    assert is_pure(rho)
    assert oracle.annihilator_dim(oracle.from_mixed(rho), 4) == 4
    assert is_pure(exp_i_omega(standard_symplectic(4)))
    with pytest.raises(ValueError):
        annihilator(MixedForm.zero(2))


@pytest.mark.parametrize("m,k", [(6, 0), (6, 1), (6, 3), (8, 2), (8, 4)])
def test_spinor_type_of_split_structures(m, k):
    assert spinor_type(split_structure(m, k)) == k


def test_float_mode_canonical_line():
    s = from_symplectic(standard_symplectic(4, exact_mode=False))
    rho = canonical_line(s)
    assert not rho.exact
    assert rho.proportional_to(exp_i_omega(standard_symplectic(4, exact_mode=False)))
    assert spinor_type(from_complex(standard_complex(4, exact_mode=False))) == 2


def test_random_structures_agree_with_matrix_type():
    rng = np.random.default_rng(7)
    for m in (2, 4, 6):
        for _ in range(4):
            s = random_structure(rng, m)
            assert spinor_type(s) == type_of(s)


def test_no_canonical_line_error_is_value_error():
    assert issubclass(NoCanonicalLine, ValueError)


def test_b_field_on_random_two_forms_preserves_type():
    rng = np.random.default_rng(3)
    s = split_structure(4, 1)
    for _ in range(3):
        b = random_two_form(rng, 4)
        assert spinor_type(b_transform(s, b)) == 1
