"""Builders and verification bundles for the torus and Kodaira-Thurston families."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from .gcs import GenStructure, TwoForm, is_generalized_complex, type_of
from .hyper import (FamilyError, HypersymplecticData, SphereFamily, anticommutator_report,
                    build_family, check_hypersymplectic, detect_max_type, evaluate,
                    family_typemap, holosymp_check, max_type_condition)
from .lie import (DoubleAlgebra, abelian, closed_2form_check, cotangent_double,
                  nonzero_nijenhuis_entries, parse_structure_equations)
from .twistor import LambdaChart, polynomial_certificate

CONVENTIONS = {
    "vector_order": "V coordinates first, then V* coordinates",
    "pairing": "<X + xi, Y + eta> = (xi(Y) + eta(X)) / 2",
    "two_form_matrix": "matrix of X -> iota_X B",
    "complex_structure": "diag(J, -J^T)",
    "symplectic_structure": "[[0, -w^{-1}], [w, 0]]",
    "b_transform": "[[1, 0], [B, 1]] S [[1, 0], [-B, 1]]; on spinors exp(-B) ^ rho",
    "nijenhuis": "<[SU, SV] - S[SU, V] - S[U, SV] - [U, V], W>",
    "twistor_type": "fiber type + 1 (complex S^2 factor); + 0 with a symplectic S^2",
}


class ParameterError(ValueError):
    pass


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    residual: float | None = None


@dataclass
class ExampleReport:
    name: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))

    def add(self, name: str, passed: bool, detail: str = "", residual=None) -> Check:
        c = Check(name, bool(passed), detail, residual)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


# -- torus -----------------------------------------------------------------


@dataclass(frozen=True)
class TorusExample:
    """dim V = 4n with block i spanned by (e_{2i-1}, f_{2i-1}, e_{2i}, f_{2i})."""

    lambdas: tuple
    mus: tuple

    def __post_init__(self):
        if len(self.lambdas) != len(self.mus) or not self.lambdas:
            raise ParameterError("need the same positive number of lambdas and mus")
        lam = tuple(_scalar(x) for x in self.lambdas)
        mu = tuple(_scalar(x) for x in self.mus)
        for i, (l, m) in enumerate(zip(lam, mu)):
            s = l * l + m * m
            if (s != 1) if isinstance(s, Fraction) else abs(s - 1) > la.eps_or_default(None):
                raise ParameterError(f"lambda_{i + 1}^2 + mu_{i + 1}^2 = {s}, expected 1")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "mus", mu)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.lambdas + self.mus)


def _scalar(x):
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            try:
                return float(x)
            except ValueError:
                raise ParameterError(f"not a number: {x!r}") from None
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True, eq=False)
class TorusData:
    example: TorusExample
    w1: TwoForm
    w2: TwoForm
    b: TwoForm
    data: HypersymplecticData
    family: SphereFamily
    double: DoubleAlgebra


def torus_forms(e: TorusExample) -> tuple[TwoForm, TwoForm, TwoForm]:
    m = 4 * e.n
    w1, w2, b = {}, {}, {}
    for i, (lam, mu) in enumerate(zip(e.lambdas, e.mus)):
        o = 4 * i
        e1, f1, e2, f2 = o, o + 1, o + 2, o + 3
        w2[(e1, f1)] = 1
        w2[(e2, f2)] = -1
        w1[(e1, f2)] = lam
        w1[(e2, f1)] = lam
        b[(e1, f2)] = mu
        b[(e2, f1)] = mu
    ex = e.exact
    return (TwoForm.from_terms(m, w1, ex), TwoForm.from_terms(m, w2, ex),
            TwoForm.from_terms(m, b, ex))


def torus_display_blocks(e: TorusExample) -> tuple[np.ndarray, np.ndarray]:
    """Block-diagonal A and D as tabulated for the example."""
    m = 4 * e.n
    a = la.zeros((m, m), e.exact)
    d = la.zeros((m, m), e.exact)
    for i, (lam, mu) in enumerate(zip(e.lambdas, e.mus)):
        o = 4 * i
        for mat, x in ((a, mu), (d, lam)):
            mat[o, o + 2] = -x
            mat[o + 1, o + 3] = -x
            mat[o + 2, o] = x
            mat[o + 3, o + 1] = x
    return a, d


def build_torus(e: TorusExample) -> TorusData:
    w1, w2, b = torus_forms(e)
    h = HypersymplecticData(w1, w2, b, 0)
    i1, i2 = h.structures()
    fam = build_family(i1, i2)
    return TorusData(e, w1, w2, b, h, fam, cotangent_double(abelian(4 * e.n, e.exact)))


# -- Kodaira-Thurston ------------------------------------------------------


@dataclass(frozen=True)
class KodairaThurstonExample:
    b1: object
    b2: object

    def __post_init__(self):
        b1, b2 = _scalar(self.b1), _scalar(self.b2)
        if b2 == 0:
            raise ParameterError("b2 must be nonzero")
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "b2", b2)

    @property
    def exact(self) -> bool:
        return isinstance(self.b1, Fraction) and isinstance(self.b2, Fraction)


# basis E_1..E_8 = (e_0, e_1, e_2, e_3, e^0, e^1, e^2, e^3); the algebra is
# H_3 x R with the R factor first
KT_STRUCTURE_EQUATIONS = "d e3 = - e1^e2"
KT_INDEX_MAP = {"e0": 0, "e1": 1, "e2": 2, "e3": 3}


def kt_template_i(b1, b2) -> list[list]:
    """The tabulated 8x8 matrix I, as printed (row j lists the image of E_j)."""
    return [[0, -1, 0, 0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 0, 0, -1, 0],
            [0, 0, 0, 0, 0, -1, 0, 0],
            [0, 0, 0, 0, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, 0, 0, 0],
            [0, 0, -1, 0, 0, 0, 0, 0]]


def kt_template_j(b1, b2) -> list[list]:
    """The tabulated 8x8 matrix J, as printed."""
    b1, b2 = _scalar(b1), _scalar(b2)
    t = 3 / b2
    return [[1, -1, 0, 0, 0, 0, b1, b2],
            [-1, -1, -b2, b1, 0, 0, 0, 0],
            [0, t, 1, 0, -b1, 0, 0, -1],
            [0, 0, 0, 1, -b2, 0, 1, 0],
            [0, 0, 0, t, -1, 1, 0, 0],
            [0, 0, 0, 0, 1, 1, -t, 0],
            [0, 0, 0, 1, 0, b2, -1, 0],
            [-t, 0, -1, 0, 0, -b1, 0, -1]]


def kt_template_family(b1, b2, a, b, c) -> list[list]:
    """The tabulated matrix of the family member at (a, b, c), as printed."""
    b1, b2, a, b, c = (_scalar(x) for x in (b1, b2, a, b, c))
    return [[b + 2 * c, -a - b + 2 * c, 2 * c * b2, -2 * c * b1, 0, 0, b * b1, b * b2],
            [a - b + 2 * c, -b - 2 * c, -b * b2, b * b1, 0, 0, 2 * c * b1, 2 * c * b2],
            [-6 * c / b2, 3 * b / b2, b - 2 * c, 0, -b * b1, -2 * c * b1, 0, a - b - 2 * c],
            [0, 0, 0, b - 2 * c, -b * b2, -2 * c * b2, -a + b + 2 * c, 0],
            [0, 0, 0, 3 * b / b2, -b - 2 * c, -a + b - 2 * c, 6 * c / b2, 0],
            [0, 0, 0, 6 * c / b2, a + b - 2 * c, b + 2 * c, -3 * b / b2, 0],
            [0, 0, 0, a + b + 2 * c, -2 * c * b2, b * b2, -b + 2 * c, 0],
            [-3 * b / b2, -6 * c / b2, -a - b - 2 * c, 0, 2 * c * b1, -b * b1, 0, -b + 2 * c]]


def _instantiate(rows, exact_mode: bool) -> np.ndarray:
    return la.exact(rows) if exact_mode else la.floating(rows)


@dataclass(frozen=True, eq=False)
class KTData:
    example: KodairaThurstonExample
    double: DoubleAlgebra
    i_mat: GenStructure
    j_mat: GenStructure
    family: SphereFamily


def kt_algebra(exact_mode: bool = True):
    return parse_structure_equations(KT_STRUCTURE_EQUATIONS, n=4, base=0, exact_mode=exact_mode)


def build_kt(e: KodairaThurstonExample) -> KTData:
    """The tabulated rows are images of basis vectors, so the column-vector
    matrices are their transposes."""
    ex = e.exact
    d = cotangent_double(kt_algebra(ex))
    i = GenStructure(_instantiate(kt_template_i(e.b1, e.b2), ex).T)
    j = GenStructure(_instantiate(kt_template_j(e.b1, e.b2), ex).T)
    return KTData(e, d, i, j, build_family(i, j))


# -- verification ----------------------------------------------------------


def _fmt(x) -> str:
    return str(x) if isinstance(x, (Fraction, int)) else f"{float(x):.6g}"


def _gc_checks(rep: ExampleReport, label: str, mat: np.ndarray) -> bool:
    gc = is_generalized_complex(mat)
    rep.add(f"{label}^2 = -Id", gc.squares_to_minus_id, residual=gc.square_residual)
    rep.add(f"{label} orthogonal", gc.orthogonal, residual=gc.orthogonal_residual)
    return gc.ok


def _first_nonzero(m: np.ndarray):
    for idx, x in np.ndenumerate(m):
        if x != 0:
            return idx, x
    return None


def _audit_reading(rep: ExampleReport, e: KodairaThurstonExample, d: DoubleAlgebra) -> None:
    """Check the tabulated matrices read as column-vector matrices (no transpose)."""
    ex = e.exact
    i = _instantiate(kt_template_i(e.b1, e.b2), ex)
    j = _instantiate(kt_template_j(e.b1, e.b2), ex)
    one = la.identity(8, ex)
    issues = []
    for label, m in (("I", i), ("J", j)):
        hit = _first_nonzero(m @ m + one) if ex else None
        if hit:
            issues.append(f"{label}^2 != -Id at entry {hit[0]}")
    hit = _first_nonzero(i @ j + j @ i) if ex else None
    if hit:
        issues.append(f"IJ + JI != 0 at entry {hit[0]}")
    for label, m in (("I", i), ("J", j)):
        try:
            s = GenStructure(m)
        except ValueError as exc:
            issues.append(f"{label} as printed is not generalized complex: {exc}")
            continue
        bad = nonzero_nijenhuis_entries(d, s, limit=3)
        if bad:
            where = ", ".join(f"N(E{a + 1}, E{b + 1}, E{c + 1}) = {_fmt(v)}" for a, b, c, v in bad)
            issues.append(f"{label} read column-wise is not integrable: {where}")
    if issues:
        rep.findings.append("column-wise reading of the tabulated I, J: " + "; ".join(issues))
    else:
        rep.findings.append("column-wise reading of the tabulated I, J passes all identities too")


def _audit_display(rep: ExampleReport, kt: KTData) -> None:
    """Express the tabulated family matrix in the basis I, J, K = IJ."""
    e = kt.example
    f = kt.family
    ex = f.exact
    basis = np.column_stack([x.mat.reshape(-1) for x in f.triple()])
    found = []
    for pt in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        shown = _instantiate(kt_template_family(e.b1, e.b2, *pt), ex)
        coeffs = None
        for reading, m in (("rows", shown.T), ("columns", shown)):
            sol = la.solve_linear(basis, m.reshape(-1))
            if sol is not None:
                coeffs = (reading, tuple(sol))
                break
        found.append((pt, coeffs))
    parts = []
    for pt, hit in found:
        if hit is None:
            parts.append(f"{pt}: not in the span of I, J, K")
        else:
            reading, co = hit
            parts.append(f"{pt} -> {tuple(_fmt(x) for x in co)} (read by {reading})")
    rep.findings.append("tabulated family matrix in coordinates (I, J, K=IJ): " + "; ".join(parts))


def verify_kt(e: KodairaThurstonExample, grid: int = 16, eps: float | None = None) -> ExampleReport:
    rep = ExampleReport("kt", {"b1": _fmt(e.b1), "b2": _fmt(e.b2), "grid": grid})
    ex = e.exact
    d = cotangent_double(kt_algebra(ex))
    rep.add("double pairing invariant", la.is_zero(d.pairing_invariance_defect(), eps))
    i = _instantiate(kt_template_i(e.b1, e.b2), ex).T
    j = _instantiate(kt_template_j(e.b1, e.b2), ex).T
    ok = _gc_checks(rep, "I", i) & _gc_checks(rep, "J", j)
    ac = i @ j + j @ i
    hit = _first_nonzero(ac) if ex else None
    rep.add("IJ + JI = 0", la.is_zero(ac, eps),
            "" if hit is None else f"first nonzero entry {hit[0]} = {_fmt(hit[1])}",
            la.max_abs(ac))
    _audit_reading(rep, e, d)
    if not ok:
        return rep
    kt = KTData(e, d, GenStructure(i), GenStructure(j), None)
    for label, s in (("I", kt.i_mat), ("J", kt.j_mat)):
        bad = nonzero_nijenhuis_entries(d, s, eps)
        rep.add(f"Nijenhuis({label}) = 0", not bad,
                "; ".join(f"N(E{a + 1}, E{b + 1}, E{c + 1}) = {_fmt(v)}" for a, b, c, v in bad))
    try:
        fam = build_family(kt.i_mat, kt.j_mat, eps)
    except FamilyError as exc:
        rep.add("family built", False, str(exc))
        return rep
    rep.add("family built", True, f"p = {_fmt(fam.p)}")
    kt = KTData(e, d, kt.i_mat, kt.j_mat, fam)
    rep.add("member (0,1,0) equals J", la.equal(evaluate(fam, 0, 1, 0).mat, kt.j_mat.mat, eps))
    bad = nonzero_nijenhuis_entries(d, fam.k, eps)
    rep.add("Nijenhuis(K) = 0", not bad)
    _audit_display(rep, kt)
    tm = family_typemap(fam, grid, eps)
    hist = tm.histogram()
    rep.add("all_types_equal_1", set(hist) == {1}, f"type histogram {hist}")
    rep.data["type_histogram"] = hist
    cert = polynomial_certificate(d, LambdaChart(fam), eps=eps)
    rep.add("polynomial certificate vanishes", cert.all_zero(eps),
            f"{len(cert.triples)} triples, interpolation consistent: {cert.consistent}")
    return rep


def verify_torus(e: TorusExample, grid: int = 64, eps: float | None = None) -> ExampleReport:
    rep = ExampleReport("torus", {"lambda": [_fmt(x) for x in e.lambdas],
                                  "mu": [_fmt(x) for x in e.mus], "grid": grid})
    t = build_torus(e)
    m = 4 * e.n
    g = t.double.base
    rep.add("B closed", closed_2form_check(g, t.b, eps))
    a_disp, d_disp = torus_display_blocks(e)
    rep.add("A = B w2^{-1} matches table", la.equal(t.data.a_mat, a_disp, eps))
    rep.add("D = w1 w2^{-1} matches table", la.equal(t.data.d_mat, d_disp, eps))
    hs = check_hypersymplectic(t.data, eps)
    rep.add("A^2 + D^2 = (p^2 - 1) Id", hs.squares, residual=hs.residuals["A^2+D^2-(p^2-1)Id"])
    rep.add("AD = DA", hs.commute, residual=hs.residuals["AD-DA"])
    rep.add("four-equation system holds", hs.system_holds, str(hs.system))
    rep.add("both verdicts agree", hs.agree)
    ac = anticommutator_report(t.family.i1, t.family.i2, eps)
    rep.add("anticommutator 2p Id with p = 0", ac.ok and ac.p == 0, ac.reason())
    for label, s in (("I1", t.family.i1), ("I2", t.family.i2), ("K", t.family.k)):
        bad = nonzero_nijenhuis_entries(t.double, s, eps)
        rep.add(f"Nijenhuis({label}) = 0", not bad)
    equal_params = len(set(e.lambdas)) == 1 and len(set(e.mus)) == 1
    hit = detect_max_type(t.family, t.data, eps)
    if equal_params:
        rep.add("maximal type found", hit is not None,
                "" if hit is None else f"(a, b, c) = {tuple(_fmt(x) for x in hit)}")
        if hit is not None:
            ty = type_of(evaluate(t.family, *hit), eps)
            rep.add(f"type at triple = {m // 2}", ty * 2 == m, f"type {ty}")
            sol = max_type_condition(t.data, eps)[0]
            if sol[2] != 0:
                hr = holosymp_check(t.data, tuple(sol), eps)
                rep.add("(w2^{-1} w1 + gamma Id)^2 = theta Id, theta < 0", hr.ok,
                        f"alpha={_fmt(hr.alpha)} beta={_fmt(hr.beta)} "
                        f"gamma={_fmt(hr.gamma)} theta={_fmt(hr.theta)}", hr.residual)
    else:
        rep.add("no maximal type", hit is None,
                "" if hit is None else f"unexpected triple {hit}")
    tm = family_typemap(t.family, grid, eps)
    hist = tm.histogram()
    rep.data["type_histogram"] = hist
    if not equal_params:
        rep.add(f"max_type < {m // 2}", max(hist) * 2 < m, f"type histogram {hist}")
    rep.add("generic member of symplectic type", 2 * hist.get(0, 0) > len(tm.samples),
            f"type histogram {hist}")
    cert = polynomial_certificate(t.double, LambdaChart(t.family), eps=eps)
    rep.add("polynomial certificate vanishes", cert.all_zero(eps),
            f"{len(cert.triples)} triples")
    return rep


def verify_example(name: str, params: dict | None = None, grid: int | None = None,
                   eps: float | None = None) -> ExampleReport:
    params = dict(params or {})
    if name == "kt":
        e = KodairaThurstonExample(params.get("b1", 0), params.get("b2", 1))
        return verify_kt(e, grid or 16, eps)
    if name == "torus":
        e = TorusExample(tuple(params.get("lambdas", ("3/5", 1))),
                         tuple(params.get("mus", ("4/5", 0))))
        return verify_torus(e, grid or 64, eps)
    raise ParameterError(f"unknown example {name!r} (expected 'torus' or 'kt')")
