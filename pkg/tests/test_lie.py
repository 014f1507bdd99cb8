import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gchyper import linalg as la
from gchyper.gcs import (TwoForm, b_transform, from_complex, from_symplectic, standard_complex,
                         type_of)
from gchyper.lie import (JacobiError, LieAlgebra, abelian, closed_2form_check, cotangent_double,
                         exterior_derivative, from_structure_equations, is_integrable, nijenhuis,
                         nonzero_nijenhuis_entries, parse_structure_equations,
                         structure_equations_text)
from randgen import random_invertible, random_two_form

HEIS_R = "d e3 = - e1^e2"          # [e1, e2] = e3, e4 central


def kt():
    return parse_structure_equations(HEIS_R, n=4)


def so3():
    return parse_structure_equations("d e1 = - e2^e3\nd e2 = - e3^e1\nd e3 = - e1^e2")


def unit(n, k):
    v = la.zeros(n)
    v[k] = 1
    return v


def test_parse_sets_brackets():
    g = kt()
    assert g.dim == 4
    assert la.equal(g.bracket(unit(4, 0), unit(4, 1)), unit(4, 2))
    assert la.is_zero(g.bracket(unit(4, 0), unit(4, 3)))
    assert la.equal(g.differential(2).mat, TwoForm.from_terms(4, {(0, 1): -1}).mat)


def test_parse_coefficients_and_bases():
    g = parse_structure_equations("dE4 = -E2^E3 + 1/2 E1^E2", n=4)
    assert g.c[1, 2, 3] == 1 and g.c[0, 1, 3] == Fraction(-1, 2)
    h = parse_structure_equations("d e2 = - e0^e1", n=3, base=0)
    assert h.c[0, 1, 2] == 1


def test_equations_text_round_trip():
    for g in (kt(), so3()):
        again = parse_structure_equations(structure_equations_text(g), n=g.dim)
        assert la.equal(again.c, g.c)


@pytest.mark.parametrize("text", ["d e3 = e1 e2", "x e3 = - e1^e2", "d e3 = - e1^e2 garbage"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_structure_equations(text, n=3)


def test_jacobi_violation_rejected():
    # [e1, e2] = e2, [e1, e3] = e1, [e2, e3] = e1 fails Jacobi
    with pytest.raises(JacobiError):
        from_structure_equations(3, {1: {(0, 1): -1}, 0: {(0, 2): -1, (1, 2): -1}})


def test_antisymmetry_required():
    c = la.zeros((2, 2, 2))
    c[0, 1, 0] = 1
    with pytest.raises(ValueError):
        LieAlgebra(c)


@pytest.mark.parametrize("make", [kt, so3])
def test_d_squared_vanishes(make):
    g = make()
    for k in range(g.dim):
        assert closed_2form_check(g, g.differential(k))


def test_double_brackets():
    d = cotangent_double(kt())
    assert la.is_zero(d.pairing_invariance_defect())
    # [e1, e^3] = -e^3 o ad_{e1} = -e^2
    got = d.bracket(unit(8, 0), unit(8, 6))
    assert la.equal(got, -unit(8, 5))
    assert la.is_zero(d.bracket(unit(8, 5), unit(8, 6)))


def classical_nijenhuis(g: LieAlgebra, j: np.ndarray) -> np.ndarray:
    n = g.dim
    out = []
    for a, b in itertools.combinations(range(n), 2):
        x, y = unit(n, a), unit(n, b)
        br = g.bracket
        out.append(br(j @ x, j @ y) - j @ br(j @ x, y) - j @ br(x, j @ y) - br(x, y))
    return np.array(out)


def random_complex_structure(rng, m):
    a = random_invertible(rng, m)
    return a @ standard_complex(m) @ la.inverse(a)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_complex_integrability_matches_classical_tensor(seed):
    rng = np.random.default_rng(seed)
    g = kt()
    j = random_complex_structure(rng, 4)
    assert is_integrable(cotangent_double(g), from_complex(j)) == la.is_zero(classical_nijenhuis(g, j))


def test_known_complex_structures_on_kt():
    g = kt()
    d = cotangent_double(g)
    j = la.exact([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    assert is_integrable(d, from_complex(j))
    # pairing e1 with e3 is not integrable
    j2 = la.exact([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    assert not la.is_zero(classical_nijenhuis(g, j2))
    assert not is_integrable(d, from_complex(j2))
    assert nonzero_nijenhuis_entries(d, from_complex(j2), limit=2)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_symplectic_integrability_is_closedness(seed):
    rng = np.random.default_rng(seed)
    g = kt()
    w = random_two_form(rng, 4, density=0.7)
    if la.rank(w.mat) < 4:
        return
    s = from_symplectic(w)
    assert is_integrable(cotangent_double(g), s) == closed_2form_check(g, w)


def test_nijenhuis_is_totally_skew_and_zero_on_abelian():
    d = cotangent_double(abelian(4))
    s = from_complex(standard_complex(4))
    n = nijenhuis(d, s)
    assert la.is_zero(n)
    d = cotangent_double(kt())
    j2 = la.exact([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
    n = nijenhuis(d, from_complex(j2))
    assert la.is_zero(n + n.transpose(1, 0, 2)) and la.is_zero(n + n.transpose(0, 2, 1))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closed_b_field_preserves_integrability_on_kt(seed):
    rng = np.random.default_rng(seed)
    g = kt()
    d = cotangent_double(g)
    w = TwoForm.from_terms(4, {(0, 2): 1, (1, 3): 1})
    s = from_symplectic(w)
    assert is_integrable(d, s)
    # e^3 ^ e^4 spans the non-closed directions
    mat = random_two_form(rng, 4).mat.copy()
    mat[3, 2] = mat[2, 3] = 0
    b = TwoForm(mat)
    assert closed_2form_check(g, b)
    t = b_transform(s, b)
    assert is_integrable(d, t) and type_of(t) == type_of(s)


def test_exterior_derivative_values():
    g = kt()
    b = TwoForm.from_terms(4, {(2, 3): 1})
    db = exterior_derivative(g, b)
    # d(e^3 ^ e^4) = -e^1 ^ e^2 ^ e^4
    assert db[0, 1, 3] == -1
    assert not closed_2form_check(g, b)
    assert closed_2form_check(g, TwoForm.from_terms(4, {(0, 2): 3, (1, 3): Fraction(1, 2)}))
