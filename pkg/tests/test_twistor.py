from fractions import Fraction

import pytest

from gchyper import linalg as la
from gchyper.gcs import TwoForm, from_complex, from_symplectic, standard_complex
from gchyper.hyper import build_family
from gchyper.lie import abelian, cotangent_double, nijenhuis_value, parse_structure_equations
from gchyper.twistor import (INFINITY, REGIME_B_TWISTED, REGIME_HYPERSYMPLECTIC,
                             REGIME_INTERMEDIATE, LambdaChart, adapted_basis, classify_regime,
                             fiber_type_at, holomorphic_basis, inverse_stereographic,
                             lambda_structure, polynomial_certificate, stereographic,
                             twistor_type_report)

F = Fraction
G = la.GaussRational

J1 = standard_complex(4)
J2 = la.exact([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])


def hypercomplex_family():
    return build_family(from_complex(J1), from_complex(J2))


def holosymplectic_family():
    return build_family(from_complex(J1), from_symplectic(TwoForm.from_terms(4, {(0, 2): 1, (1, 3): -1})))


def kt_double():
    return cotangent_double(parse_structure_equations("d e3 = - e1^e2", n=4))


@pytest.mark.parametrize("lam,point", [(0, (1, 0, 0)), (G(0, 1), (0, 1, 0)), (1, (0, 0, 1)),
                                       (INFINITY, (-1, 0, 0)), (G(0, -1), (0, -1, 0))])
def test_stereographic_values(lam, point):
    assert tuple(stereographic(lam)) == point


@pytest.mark.parametrize("lam", [G(2, 1), G(F(1, 3), -2), F(5, 7), G(0, F(1, 2))])
def test_stereographic_round_trip(lam):
    a, b, c = stereographic(lam)
    assert a * a + b * b + c * c == 1
    back = inverse_stereographic(a, b, c)
    assert back == (lam if isinstance(lam, G) else G(lam))
    assert inverse_stereographic(-1, 0, 0) == INFINITY


def test_float_stereographic():
    a, b, c = stereographic(0.5 + 2j)
    assert abs(a * a + b * b + c * c - 1) < 1e-12
    assert abs(inverse_stereographic(a, b, c) - (0.5 + 2j)) < 1e-12


def test_lambda_structures_at_special_points():
    f = hypercomplex_family()
    chart = LambdaChart(f)
    assert lambda_structure(chart, 0) == f.i1
    assert lambda_structure(chart, G(0, 1)) == f.j
    assert lambda_structure(chart, INFINITY) == -f.i1
    assert chart.structure(1) == f.k


@pytest.mark.parametrize("lam", [0, 2, G(1, 1), F(-1, 3)])
def test_holomorphic_basis_spans_eigenspace(lam):
    for f in (hypercomplex_family(), holosymplectic_family()):
        chart = LambdaChart(f)
        s = la.complexify(lambda_structure(chart, lam).mat)
        vecs = holomorphic_basis(chart, lam)
        assert la.span_rank(vecs) == f.dim_v
        for v in vecs:
            assert la.is_zero(s @ v - la.IMAG * v)


def test_adapted_basis_relations():
    f = hypercomplex_family()
    j = la.complexify(f.j.mat)
    for x, y in adapted_basis(LambdaChart(f)):
        assert la.equal(j @ x, la.conj(y))
        assert la.equal(j @ y, -la.conj(x))


def test_certificate_vanishes_on_abelian_double():
    cert = polynomial_certificate(cotangent_double(abelian(4)), LambdaChart(hypercomplex_family()))
    assert cert.all_zero() and cert.consistent
    assert len(cert.triples) == 4


def test_certificate_is_the_cubic_through_the_samples():
    d = kt_double()
    chart = LambdaChart(hypercomplex_family())
    cert = polynomial_certificate(d, chart)
    assert cert.consistent and not cert.all_zero()
    for lam in (F(1, 2), G(1, 1), G(-2, F(1, 3))):
        mat = la.complexify(lambda_structure(chart, lam).mat)
        vecs = holomorphic_basis(chart, lam)
        for t, row in zip(cert.triples, cert.coeffs):
            direct = nijenhuis_value(d, mat, *(vecs[i] for i in t))
            poly = ((row[3] * lam + row[2]) * lam + row[1]) * lam + row[0]
            assert direct == poly


def test_certificate_vanishes_for_integrable_family():
    cert = polynomial_certificate(kt_double(), LambdaChart(holosymplectic_family()))
    assert cert.all_zero() and list(cert.nonzero()) == []


def test_certificate_dimension_check():
    with pytest.raises(ValueError):
        polynomial_certificate(cotangent_double(abelian(2)), LambdaChart(hypercomplex_family()))


def test_regime_classification():
    assert classify_regime([2, 2, 2], 4) == REGIME_B_TWISTED
    assert classify_regime([0, 2, 1], 4) == REGIME_HYPERSYMPLECTIC
    assert classify_regime([1, 1, 2], 4) == REGIME_INTERMEDIATE


def test_twistor_report_hypercomplex():
    rep = twistor_type_report(hypercomplex_family(), 4)
    assert rep.regime == REGIME_B_TWISTED
    assert rep.min_twistor_type == rep.max_twistor_type == 3


def test_twistor_report_holosymplectic():
    f = holosymplectic_family()
    rep = twistor_type_report(f, 4)
    assert rep.regime == REGIME_HYPERSYMPLECTIC
    assert (rep.min_twistor_type, rep.max_twistor_type) == (1, 3)
    sym = twistor_type_report(f, 4, s2_symplectic=True)
    assert all(s.twistor_type == s.fiber_type for s in sym.samples)
    assert fiber_type_at(LambdaChart(f), 0) == 2
    assert fiber_type_at(LambdaChart(f), 1) == 0
