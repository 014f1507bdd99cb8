"""S^2-families of generalized complex structures and the symplectic-pair conditions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from .gcs import (GenStructure, TwoForm, b_transform, from_complex, from_symplectic,
                  type_of)


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class AnticommutatorReport:
    scalar: bool
    p: object
    in_range: bool
    residual: float

    @property
    def ok(self) -> bool:
        return self.scalar and self.in_range

    def reason(self) -> str:
        if not self.scalar:
            return f"anticommutator is not a multiple of Id (residual {self.residual:.3g})"
        if not self.in_range:
            return f"anticommutator is 2p Id with |p| = {abs(float(self.p))} >= 1"
        return "ok"


def anticommutator_report(i1: GenStructure, i2: GenStructure,
                          eps: float | None = None) -> AnticommutatorReport:
    if i1.dim_v != i2.dim_v:
        raise ValueError("structures act on different spaces")
    la.same_mode(i1.mat, i2.mat)
    ac = i1.mat @ i2.mat + i2.mat @ i1.mat
    n = ac.shape[0]
    p = ac[0, 0] / 2
    rest = ac - 2 * p * la.identity(n, i1.exact)
    scalar = la.is_zero(rest, eps)
    if scalar:
        in_range = abs(p) < 1 if i1.exact else abs(p) < 1 - la.eps_or_default(eps)
    else:
        in_range = False
    return AnticommutatorReport(scalar, p if scalar else None, in_range, la.max_abs(rest))


def anticommutator_scalar(i1: GenStructure, i2: GenStructure, eps: float | None = None):
    """p with i1 i2 + i2 i1 = 2p Id and |p| < 1, otherwise None."""
    rep = anticommutator_report(i1, i2, eps)
    return rep.p if rep.ok else None


def _anticommute(x: np.ndarray, y: np.ndarray, eps) -> bool:
    return la.is_zero(x @ y + y @ x, eps)


@dataclass(frozen=True, eq=False)
class SphereFamily:
    """Family a*I + b*J' + c*K from an anticommuting-up-to-scalar pair.

    ``i1`` and ``i2`` are the raw inputs; ``j`` is ``(i2 + p i1)/sqrt(1 - p^2)``
    and ``k = i1 j``.
    """

    i1: GenStructure
    i2: GenStructure
    j: GenStructure
    k: GenStructure
    p: object

    @property
    def dim_v(self) -> int:
        return self.i1.dim_v

    @property
    def exact(self) -> bool:
        return self.i1.exact and self.j.exact

    def triple(self) -> tuple[GenStructure, GenStructure, GenStructure]:
        return self.i1, self.j, self.k

    def to_float(self) -> "SphereFamily":
        if not self.exact:
            return self
        return SphereFamily(self.i1.to_float(), self.i2.to_float(), self.j.to_float(),
                            self.k.to_float(), float(self.p))


def build_family(i1: GenStructure, i2: GenStructure, eps: float | None = None) -> SphereFamily:
    if i1.dim_v != i2.dim_v:
        raise FamilyError("structures act on different spaces")
    if i1.dim_v % 4:
        raise FamilyError(f"dimension of V must be a multiple of 4, got {i1.dim_v}")
    rep = anticommutator_report(i1, i2, eps)
    if not rep.ok:
        raise FamilyError(rep.reason())
    p = rep.p
    if i1.exact:
        s = la.rational_sqrt(1 - p * p)
        if s is None:
            # irrational normalisation: continue in floating point
            i1, i2, p = i1.to_float(), i2.to_float(), float(p)
            s = math.sqrt(1 - p * p)
    else:
        s = math.sqrt(1 - p * p)
    jm = (i2.mat + p * i1.mat) / s if p != 0 else i2.mat
    try:
        j = GenStructure(jm)
        k = GenStructure(i1.mat @ jm)
    except ValueError as exc:
        raise FamilyError(f"normalised pair is not generalized complex: {exc}") from None
    for x, y, what in ((i1, j, "I, J'"), (i1, k, "I, K"), (j, k, "J', K")):
        if not _anticommute(x.mat, y.mat, eps):
            raise FamilyError(f"{what} do not anticommute")
    return SphereFamily(i1, i2, j, k, p)


def _coeff(x, exact_mode: bool):
    if exact_mode:
        return la.to_fraction(x)
    return float(x)


def _is_exact_scalar(x) -> bool:
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return True
    if isinstance(x, str):
        return True
    return isinstance(x, (float, np.floating)) and float(x).is_integer()


def evaluate(f: SphereFamily, a, b, c, eps: float | None = None) -> GenStructure:
    exact_mode = f.exact and all(_is_exact_scalar(x) for x in (a, b, c))
    if not exact_mode and f.exact:
        f = f.to_float()
    a, b, c = (_coeff(x, exact_mode) for x in (a, b, c))
    norm = a * a + b * b + c * c
    if (norm != 1) if exact_mode else abs(norm - 1) > la.eps_or_default(eps):
        raise ValueError(f"(a, b, c) must be a unit vector, |.|^2 = {norm}")
    i, j, k = f.triple()
    return GenStructure(a * i.mat + b * j.mat + c * k.mat)


def normalize_triple(a, b, c):
    """Scale to the unit sphere, exactly when the norm is rational."""
    n2 = a * a + b * b + c * c
    if n2 == 0:
        raise ValueError("zero vector")
    if all(isinstance(x, (int, Fraction)) for x in (a, b, c)):
        r = la.rational_sqrt(Fraction(n2))
        if r is not None:
            return Fraction(a) / r, Fraction(b) / r, Fraction(c) / r
    r = math.sqrt(float(n2))
    return float(a) / r, float(b) / r, float(c) / r


# -- symplectic pairs ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HypersymplecticData:
    """Two symplectic forms, a 2-form B and p; A = B w2^{-1}, D = w1 w2^{-1} + p Id."""

    w1: TwoForm
    w2: TwoForm
    b: TwoForm
    p: object = 0
    w1_inv: np.ndarray = field(init=False, repr=False)
    w2_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        la.same_mode(self.w1.mat, self.w2.mat, self.b.mat)
        for name, w in (("w1", self.w1), ("w2", self.w2)):
            try:
                inv = la.inverse(w.mat)
            except ValueError:
                raise ValueError(f"{name} is degenerate") from None
            object.__setattr__(self, f"{name}_inv", inv)
        object.__setattr__(self, "p", _coeff(self.p, self.exact))

    @property
    def exact(self) -> bool:
        return la.is_exact(self.w1.mat)

    @property
    def dim_v(self) -> int:
        return self.w1.dim_v

    @property
    def a_mat(self) -> np.ndarray:
        return self.b.mat @ self.w2_inv

    @property
    def d_mat(self) -> np.ndarray:
        m = self.dim_v
        return self.w1.mat @ self.w2_inv + self.p * la.identity(m, self.exact)

    def structures(self) -> tuple[GenStructure, GenStructure]:
        """I1 from w1 and the B-transform of the structure of w2."""
        return from_symplectic(self.w1), b_transform(from_symplectic(self.w2), self.b)


@dataclass(frozen=True)
class HypersymplecticReport:
    squares: bool          # A^2 + D^2 = (p^2 - 1) Id
    commute: bool          # AD = DA
    system: tuple[bool, bool, bool, bool]
    residuals: dict

    @property
    def condition_holds(self) -> bool:
        return self.squares and self.commute

    @property
    def system_holds(self) -> bool:
        return all(self.system)

    @property
    def agree(self) -> bool:
        return self.condition_holds == self.system_holds


def check_hypersymplectic(h: HypersymplecticData, eps: float | None = None) -> HypersymplecticReport:
    m = h.dim_v
    one = la.identity(m, h.exact)
    a, d = h.a_mat, h.d_mat
    w1, w2, b = h.w1.mat, h.w2.mat, h.b.mat
    w1i, w2i = h.w1_inv, h.w2_inv
    p = h.p
    res = {
        "A^2+D^2-(p^2-1)Id": a @ a + d @ d - (p * p - 1) * one,
        "AD-DA": a @ d - d @ a,
        "system1": w2i @ w1 + w1i @ w2 + w1i @ b @ w2i @ b + 2 * p * one,
        "system2": w1 @ w2i + w2 @ w1i + b @ w2i @ b @ w1i + 2 * p * one,
        "system3": w1i @ b @ w2i - w2i @ b @ w1i,
        "system4": w1 @ w2i @ b - b @ w2i @ w1,
    }
    ok = {k: la.is_zero(v, eps) for k, v in res.items()}
    return HypersymplecticReport(
        ok["A^2+D^2-(p^2-1)Id"], ok["AD-DA"],
        (ok["system1"], ok["system2"], ok["system3"], ok["system4"]),
        {k: la.max_abs(v) for k, v in res.items()})


def data_from_family(f: SphereFamily) -> HypersymplecticData:
    """Recover (w1, w2, B, p) from a family built on a symplectic pair."""
    m = f.dim_v
    i1, i2 = f.i1.mat, f.i2.mat
    if not (la.is_zero(i1[:m, :m]) and la.is_zero(i1[m:, m:])):
        raise ValueError("first structure is not of symplectic form")
    w1 = TwoForm(i1[m:, :m])
    try:
        w2 = TwoForm(-la.inverse(i2[:m, m:]))
    except ValueError:
        raise ValueError("second structure has a degenerate Poisson block") from None
    b = TwoForm(w2.mat @ i2[:m, :m])
    h = HypersymplecticData(w1, w2, b, f.p)
    if not (la.equal(from_symplectic(w1).mat, i1)
            and la.equal(h.structures()[1].mat, i2)):
        raise ValueError("family is not built from a B-transformed symplectic pair")
    return h


def max_type_condition(h: HypersymplecticData, eps: float | None = None) -> list[np.ndarray]:
    """Basis of solutions (a, b, c) of c B = a w2 + b w1."""
    cols = [h.w2.mat.reshape(-1), h.w1.mat.reshape(-1), -h.b.mat.reshape(-1)]
    return la.nullspace(np.column_stack(cols), eps)


def _family_coordinates(abc, p, s):
    """Convert a solution of c B = a w2 + b w1 to (I, J', K) coordinates."""
    a, b, c = abc
    return a - b * p, s * b, s * c


def detect_max_type(f: SphereFamily, h: HypersymplecticData | None = None,
                    eps: float | None = None):
    """A unit (a, b, c) whose member has maximal type, or None.

    Solves the linear condition on (a, b, c), normalises, and confirms the
    type of the member by rank.
    """
    h = h if h is not None else data_from_family(f)
    sols = max_type_condition(h, eps)
    if not sols:
        return None
    p = f.p
    s = Fraction(1) if p == 0 else (la.rational_sqrt(1 - p * p) if f.exact else None)
    if s is None:
        s = math.sqrt(1 - float(p) ** 2)
    m = f.dim_v
    for sol in sols:
        coords = _family_coordinates(sol, p, s)
        if all(x == 0 for x in coords):
            continue
        triple = normalize_triple(*coords)
        member = evaluate(f, *triple, eps=eps)
        if type_of(member, eps) * 2 == m:
            return triple
    return None


@dataclass(frozen=True)
class HolosympReport:
    alpha: object
    beta: object
    gamma: object
    theta: object
    holds: bool
    theta_negative: bool
    residual: float

    @property
    def ok(self) -> bool:
        return self.holds and self.theta_negative


def holosymp_check(h: HypersymplecticData, abc, eps: float | None = None) -> HolosympReport:
    """For c B = a w2 + b w1 with c != 0: (w2^{-1} w1 + gamma Id)^2 = theta Id."""
    a, b, c = abc
    if c == 0:
        raise ValueError("needs c != 0")
    alpha, beta = b / c, a / c
    p = h.p
    gamma = (alpha * beta + p) / (alpha * alpha + 1)
    theta = gamma * gamma - (1 + beta * beta) / (1 + alpha * alpha)
    one = la.identity(h.dim_v, h.exact)
    x = h.w2_inv @ h.w1.mat + gamma * one
    res = x @ x - theta * one
    return HolosympReport(alpha, beta, gamma, theta, la.is_zero(res, eps), theta < 0,
                          la.max_abs(res))


@dataclass(frozen=True)
class BHolosympReport:
    equations: tuple[bool, bool, bool, bool]
    reduction: bool
    p: object
    k_rank_maximal: bool | None

    @property
    def ok(self) -> bool:
        return all(self.equations) and self.reduction and bool(self.k_rank_maximal)


def check_b_holosymplectic(j: np.ndarray, w: TwoForm, b: TwoForm,
                           eps: float | None = None) -> BHolosympReport:
    """Checks the pair diag(J, -J^T) and the B-transform of the structure of w."""
    m = w.dim_v
    ex = la.is_exact(j)
    la.same_mode(j, w.mat, b.mat)
    one = la.identity(m, ex)
    if not la.is_zero(j @ j + one, eps):
        raise ValueError("J must satisfy J^2 = -Id")
    try:
        wi = la.inverse(w.mat)
    except ValueError:
        raise ValueError("symplectic form is degenerate") from None
    wm, bm, jt = w.mat, b.mat, j.T
    third = j @ wi @ bm + wi @ bm @ j
    p = third[0, 0] / 2
    eqs = (
        la.is_zero(wm @ j - jt @ wm, eps),
        la.is_zero(wm @ j - jt @ wm + bm @ wi @ bm @ j - jt @ bm @ wi @ bm, eps),
        la.is_zero(third - 2 * p * one, eps),
        la.is_zero(jt @ bm @ wi + bm @ wi @ jt - 2 * p * one, eps),
    )
    reduction = la.is_zero(jt @ bm + bm @ j - 2 * p * wm, eps)
    k_rank = None
    if all(eqs) and abs(p) < 1 and m % 4 == 0:
        f = build_family(from_complex(j), b_transform(from_symplectic(w), b), eps)
        k_rank = la.rank(f.k.poisson, eps) == m == la.rank(wi @ jt, eps)
    return BHolosympReport(eqs, reduction, p, k_rank)


# -- type maps -------------------------------------------------------------


@dataclass(frozen=True)
class TypeSample:
    a: object
    b: object
    c: object
    type: int
    exact: bool


@dataclass(frozen=True)
class TypeMap:
    dim_v: int
    samples: tuple[TypeSample, ...]

    def types(self) -> list[int]:
        return [s.type for s in self.samples]

    def histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for t in self.types():
            out[t] = out.get(t, 0) + 1
        return dict(sorted(out.items()))


AXIS_POINTS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


def sphere_samples(grid: int) -> list[tuple]:
    """Six exact axis points followed by a Fibonacci sphere of grid**2 points."""
    if grid < 2:
        raise ValueError("grid must be at least 2")
    pts: list[tuple] = [tuple(Fraction(x) for x in p) for p in AXIS_POINTS]
    n = grid * grid
    golden = math.pi * (3 - math.sqrt(5))
    for i in range(n):
        a = 1 - (2 * i + 1) / n
        r = math.sqrt(max(0.0, 1 - a * a))
        phi = i * golden
        pts.append((a, r * math.cos(phi), r * math.sin(phi)))
    return pts


def family_typemap(f: SphereFamily, grid: int, eps: float | None = None) -> TypeMap:
    samples = []
    ffloat = f.to_float()
    for a, b, c in sphere_samples(grid):
        exact_pt = isinstance(a, Fraction)
        member = evaluate(f if exact_pt else ffloat, a, b, c, eps=eps)
        samples.append(TypeSample(a, b, c, type_of(member, eps), member.exact))
    return TypeMap(f.dim_v, tuple(samples))
