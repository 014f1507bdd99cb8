"""The family as a function of lambda, the cubic integrability certificate, and twistor types.

``lambda`` runs over the Riemann sphere through the stereographic chart
``St(lam) = (1 - |lam|^2, 2 Im lam, 2 Re lam) / (1 + |lam|^2)``, so that
``St(0)`` is the first structure, ``St(i)`` the second and ``lam = oo`` the
negative of the first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg as la
from .gcs import GenStructure, type_of
from .hyper import SphereFamily, evaluate, family_typemap
from .lie import DoubleAlgebra, nijenhuis_value

INFINITY = math.inf

CERTIFICATE_POINTS = (1, 2, 3, 5)
CHECK_POINT = 7


def _is_infinite(lam) -> bool:
    return lam is None or (isinstance(lam, (float, int)) and math.isinf(lam))


def _exact_lambda(lam) -> bool:
    return isinstance(lam, (int, Fraction, la.GaussRational)) and not isinstance(lam, bool)


def stereographic(lam):
    """(a, b, c) on S^2 for lam in C or infinity."""
    if _is_infinite(lam):
        return (-1, 0, 0)
    if _exact_lambda(lam):
        z = lam if isinstance(lam, la.GaussRational) else la.GaussRational(lam)
        n2 = z.norm2()
        d = 1 + n2
        return ((1 - n2) / d, 2 * z.im / d, 2 * z.re / d)
    z = complex(lam)
    n2 = abs(z) ** 2
    d = 1 + n2
    return ((1 - n2) / d, 2 * z.imag / d, 2 * z.real / d)


def inverse_stereographic(a, b, c):
    """lam = (c + i b) / (1 + a); the point (-1, 0, 0) maps to infinity."""
    if a == -1:
        return INFINITY
    if all(isinstance(x, (int, Fraction)) for x in (a, b, c)):
        return la.GaussRational(c, b) / (1 + Fraction(a))
    return complex(c, b) / (1 + a)


@dataclass(frozen=True, eq=False)
class LambdaChart:
    family: SphereFamily

    def structure(self, lam) -> GenStructure:
        return lambda_structure(self, lam)


def lambda_structure(chart: LambdaChart, lam) -> GenStructure:
    if _is_infinite(lam):
        return -chart.family.i1
    return evaluate(chart.family, *stereographic(lam))


class AdaptedBasisError(ValueError):
    pass


def _complex_mode(v: np.ndarray, exact_mode: bool) -> np.ndarray:
    return la.exact_complex(v) if exact_mode else np.asarray(v, dtype=complex)


def adapted_basis(chart: LambdaChart, eps: float | None = None) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairs (X, Y) spanning the +i-eigenspace of I with J' X = conj(Y), J' Y = -conj(X)."""
    f = chart.family
    n = 2 * f.dim_v
    ex = f.exact
    i_mat = la.complexify(f.i1.mat)
    j_mat = la.complexify(f.j.mat)
    shifted = i_mat - la.imag_unit(ex) * la.complexify(la.identity(n, ex))
    l_basis = la.nullspace(shifted, eps)
    pairs: list[tuple[np.ndarray, np.ndarray]] = []
    chosen: list[np.ndarray] = []
    for v in l_basis:
        if chosen and la.span_rank(chosen + [v], eps) == len(chosen):
            continue
        y = la.conj(j_mat @ v)
        if la.span_rank(chosen + [v, y], eps) != len(chosen) + 2:
            raise AdaptedBasisError("J' does not act as a quaternionic structure on L")
        pairs.append((v, y))
        chosen += [v, y]
    if len(chosen) != f.dim_v:
        raise AdaptedBasisError(f"adapted basis has {len(chosen)} vectors, expected {f.dim_v}")
    return pairs


def holomorphic_basis(chart: LambdaChart, lam, eps: float | None = None,
                      pairs=None) -> list[np.ndarray]:
    """X - lam conj(Y), Y + lam conj(X) for the adapted pairs."""
    if _is_infinite(lam):
        raise ValueError("lam must be finite")
    pairs = pairs if pairs is not None else adapted_basis(chart, eps)
    ex = chart.family.exact and _exact_lambda(lam)
    if ex and not isinstance(lam, la.GaussRational):
        lam = la.GaussRational(lam)
    out = []
    for x, y in pairs:
        if not ex:
            x, y = la.floating(x), la.floating(y)
            lam = complex(lam)
        out.append(x - lam * la.conj(y))
        out.append(y + lam * la.conj(x))
    return out


@dataclass(frozen=True)
class PolynomialCertificate:
    """Coefficients N_0..N_3 of lam -> N_lam(U_lam, V_lam, W_lam) per basis triple."""

    triples: tuple[tuple[int, int, int], ...]
    coeffs: np.ndarray          # shape (len(triples), 4), N_0 first
    points: tuple
    check_point: object
    consistent: bool            # prediction at the check point matches

    def all_zero(self, eps: float | None = None) -> bool:
        return la.is_zero(self.coeffs, eps)

    def nonzero(self, eps: float | None = None):
        for t, row in zip(self.triples, self.coeffs):
            for deg, x in enumerate(row):
                if not la.scalar_is_zero(x, eps):
                    yield t, deg, x


def _vandermonde(points, exact_mode: bool) -> np.ndarray:
    rows = [[Fraction(p) ** k if exact_mode else float(p) ** k for k in range(len(points))]
            for p in points]
    return la.exact(rows) if exact_mode else np.array(rows)


def polynomial_certificate(d: DoubleAlgebra, chart: LambdaChart,
                           points=CERTIFICATE_POINTS, check_point=CHECK_POINT,
                           eps: float | None = None) -> PolynomialCertificate:
    f = chart.family
    if d.dim != 2 * f.dim_v:
        raise ValueError(f"family on dim V = {f.dim_v} does not act on a double of dimension {d.dim}")
    if len(points) != 4:
        raise ValueError("need four interpolation points")
    ex = f.exact
    pairs = adapted_basis(chart, eps)

    def values_at(lam):
        s = lambda_structure(chart, lam)
        mat = la.complexify(s.mat)
        vecs = holomorphic_basis(chart, lam, eps, pairs)
        return {t: nijenhuis_value(d, mat, vecs[t[0]], vecs[t[1]], vecs[t[2]])
                for t in itertools.combinations(range(len(vecs)), 3)}

    samples = [values_at(lam) for lam in points]
    check = values_at(check_point)
    triples = tuple(samples[0].keys())
    vinv = la.inverse(_vandermonde(points, ex))
    if ex:
        vinv = la.exact_complex(vinv)
    rows = []
    consistent = True
    for t in triples:
        y = np.array([s[t] for s in samples], dtype=object if ex else complex)
        coeffs = vinv @ y
        pred = sum(coeffs[k] * (Fraction(check_point) ** k if ex else float(check_point) ** k)
                   for k in range(4))
        if not la.scalar_is_zero(pred - check[t], None if ex else _tol(y, eps)):
            consistent = False
        rows.append(coeffs)
    arr = np.array(rows, dtype=object if ex else complex).reshape(len(triples), 4)
    return PolynomialCertificate(triples, arr, tuple(points), check_point, consistent)


def _tol(y: np.ndarray, eps):
    return la.eps_or_default(eps) * max(1.0, la.max_abs(y)) * 1e3


# -- twistor types ---------------------------------------------------------

REGIME_B_TWISTED = "b-twisted-hypercomplex"
REGIME_HYPERSYMPLECTIC = "hypersymplectic"
REGIME_INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class TwistorSample:
    a: object
    b: object
    c: object
    fiber_type: int
    twistor_type: int


@dataclass(frozen=True)
class TwistorReport:
    dim_v: int
    s2_symplectic: bool
    samples: tuple[TwistorSample, ...]
    regime: str

    @property
    def min_twistor_type(self) -> int:
        return min(s.twistor_type for s in self.samples)

    @property
    def max_twistor_type(self) -> int:
        return max(s.twistor_type for s in self.samples)


def classify_regime(fiber_types, dim_v: int) -> str:
    """Fiber types all maximal: B-twisted hypercomplex; some fiber of type 0: hypersymplectic."""
    types = list(fiber_types)
    if all(2 * t == dim_v for t in types):
        return REGIME_B_TWISTED
    if min(types) == 0:
        return REGIME_HYPERSYMPLECTIC
    return REGIME_INTERMEDIATE


def twistor_type_report(f: SphereFamily, grid: int, s2_symplectic: bool = False,
                        eps: float | None = None) -> TwistorReport:
    """Type map with the twistor type: fiber type plus 1 for the complex S^2 factor
    (plus 0 when the sphere carries its symplectic form)."""
    tm = family_typemap(f, grid, eps)
    extra = 0 if s2_symplectic else 1
    samples = tuple(TwistorSample(s.a, s.b, s.c, s.type, s.type + extra) for s in tm.samples)
    for s in samples:
        assert s.twistor_type == s.fiber_type + extra
    return TwistorReport(f.dim_v, s2_symplectic, samples,
                         classify_regime((s.fiber_type for s in samples), f.dim_v))


def fiber_type_at(chart: LambdaChart, lam, eps: float | None = None) -> int:
    return type_of(lambda_structure(chart, lam), eps)
