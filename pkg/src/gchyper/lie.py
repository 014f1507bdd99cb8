"""Lie algebras by structure constants and their cotangent doubles.

Structure constants are stored as ``c[i, j, k]`` with ``[e_i, e_j] = sum_k
c[i, j, k] e_k``.  The dual encoding is ``de^k(X, Y) = -e^k([X, Y])``, so
``de^k = -sum_{i<j} c[i, j, k] e^i ^ e^j``.

Only left-invariant data is handled, so the Courant bracket on invariant
sections is the algebraic bracket of the cotangent double.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .gcs import GenStructure, TwoForm, pairing_matrix


class JacobiError(ValueError):
    pass


def _sparse(c: np.ndarray) -> list[tuple[int, int, int, object]]:
    return [(i, j, k, x) for (i, j, k), x in np.ndenumerate(c) if x != 0]


def _zeros_for(n: int, *arrays: np.ndarray) -> np.ndarray:
    if any(la.is_exact(a) for a in arrays):
        return la.zeros(n, True)
    return np.zeros(n, dtype=np.result_type(*arrays, float))


def _bracket_sparse(entries, n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = _zeros_for(n, u, v)
    for i, j, k, x in entries:
        if u[i] != 0 and v[j] != 0:
            out[k] += x * u[i] * v[j]
    return out


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    c: np.ndarray
    names: tuple[str, ...] = ()
    dim: int = field(init=False)
    entries: list = field(init=False, repr=False)

    def __post_init__(self):
        c = np.asarray(self.c)
        n = c.shape[0]
        if c.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape (n, n, n), got {c.shape}")
        if not la.is_zero(c + c.transpose(1, 0, 2)):
            raise ValueError("structure constants are not antisymmetric")
        jac = jacobiator(c)
        if not la.is_zero(jac):
            i, j, k = next(idx for idx, x in np.ndenumerate(jac) if not la.scalar_is_zero(x))[:3]
            raise JacobiError(f"Jacobi identity fails on (e{i}, e{j}, e{k})")
        c = c.copy()
        c.setflags(write=False)
        names = tuple(self.names) or tuple(f"e{i}" for i in range(n))
        if len(names) != n:
            raise ValueError("need one name per basis vector")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "entries", _sparse(c))

    @property
    def exact(self) -> bool:
        return la.is_exact(self.c)

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        u, v = np.asarray(u), np.asarray(v)
        if la.is_exact(u) != la.is_exact(v) or (not la.is_exact(u) and self.exact):
            u, v = la.floating(u), la.floating(v)
            return _bracket_sparse([(i, j, k, float(x)) for i, j, k, x in self.entries],
                                   self.dim, u, v)
        return _bracket_sparse(self.entries, self.dim, u, v)

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ad_x acting on column vectors."""
        return np.tensordot(x, self.c, axes=(0, 0)).T

    def is_abelian(self) -> bool:
        return la.is_zero(self.c)

    def differential(self, k: int) -> TwoForm:
        """de^k as a 2-form."""
        n = self.dim
        return TwoForm.from_terms(
            n, {(i, j): -self.c[i, j, k] for i in range(n) for j in range(i + 1, n)},
            self.exact)


def jacobiator(c: np.ndarray) -> np.ndarray:
    """J[i, j, k, :] = [[e_i, e_j], e_k] + cyclic."""
    n = c.shape[0]
    t = la.zeros((n, n, n, n), True) if la.is_exact(c) else np.zeros((n, n, n, n), dtype=c.dtype)
    by_first: dict[int, list] = {}
    for m, k, l, y in _sparse(c):
        by_first.setdefault(m, []).append((k, l, y))
    # [[e_i, e_j], e_k] = sum_m c[i, j, m] c[m, k, :]
    for i, j, m, x in _sparse(c):
        for k, l, y in by_first.get(m, ()):
            t[i, j, k, l] += x * y
    return t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)


def abelian(n: int, exact_mode: bool = True) -> LieAlgebra:
    return LieAlgebra(la.zeros((n, n, n), exact_mode))


def from_structure_equations(n: int, eqs: dict, exact_mode: bool = True,
                             names=()) -> LieAlgebra:
    """Build from ``{k: {(i, j): coeff}}`` meaning de^k = sum coeff e^i ^ e^j.

    Indices are 0-based.  Raises :class:`JacobiError` when d^2 != 0.
    """
    c = la.zeros((n, n, n), exact_mode)
    for k, terms in eqs.items():
        for (i, j), coeff in terms.items():
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n) or i == j:
                raise ValueError(f"bad indices in d e{k}: ({i}, {j})")
            x = la.to_fraction(coeff) if exact_mode else float(coeff)
            c[i, j, k] -= x
            c[j, i, k] += x
    return LieAlgebra(c, names)


_EQ = re.compile(r"^\s*d\s*([A-Za-z]+)\s*(\d+)\s*=\s*(.*)$")
_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z]+)\s*(\d+)\s*\^\s*([A-Za-z]+)\s*(\d+)")


def parse_structure_equations(text: str, n: int | None = None, base: int = 1,
                              exact_mode: bool = True) -> LieAlgebra:
    """Parse lines like ``d e3 = - e1^e2``; ``base`` is the first index used."""
    eqs: dict[int, dict] = {}
    top = -1
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _EQ.match(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'd eK = ...'")
        k = int(m.group(2)) - base
        rhs = m.group(3).strip()
        terms: dict = {}
        if rhs != "0":
            pos = 0
            rhs_compact = rhs.replace(" ", "")
            for t in _TERM.finditer(rhs_compact):
                if t.start() != pos or (t.group(1) == "" and pos > 0):
                    raise ValueError(f"line {lineno}: cannot parse {rhs!r}")
                pos = t.end()
                coeff = la.to_fraction(t.group(2) or 1)
                if t.group(1) == "-":
                    coeff = -coeff
                i, j = int(t.group(4)) - base, int(t.group(6)) - base
                terms[(i, j)] = terms.get((i, j), 0) + coeff
                top = max(top, i, j)
            if pos != len(rhs_compact):
                raise ValueError(f"line {lineno}: cannot parse {rhs!r}")
        if k < 0:
            raise ValueError(f"line {lineno}: index below base {base}")
        eqs.setdefault(k, {}).update(terms)
        top = max(top, k)
    size = n if n is not None else top + 1
    if top >= size:
        raise ValueError(f"index {top + base} out of range for dimension {size}")
    if not exact_mode:
        eqs = {k: {ij: float(v) for ij, v in t.items()} for k, t in eqs.items()}
    return from_structure_equations(size, eqs, exact_mode)


def structure_equations_text(g: LieAlgebra, base: int = 1) -> str:
    lines = []
    for k in range(g.dim):
        terms = []
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                x = -g.c[i, j, k]
                if x == 0:
                    continue
                sign = "-" if x < 0 else "+"
                mag = abs(x)
                coeff = "" if mag == 1 else f"{mag} "
                terms.append(f"{sign} {coeff}e{i + base}^e{j + base}")
        rhs = " ".join(terms).lstrip("+ ") if terms else "0"
        lines.append(f"d e{k + base} = {rhs}")
    return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class DoubleAlgebra:
    """g + g* with [(X, a), (Y, b)] = ([X, Y], -b o ad_X + a o ad_Y)."""

    base: LieAlgebra
    algebra: LieAlgebra = field(init=False)

    def __post_init__(self):
        g = self.base
        n = g.dim
        c = la.zeros((2 * n, 2 * n, 2 * n), g.exact)
        c[:n, :n, :n] = g.c
        # [E_i, E^j] = -E^j o ad_{E_i}: coefficient of E^l is -c[i, l, j]
        c[:n, n:, n:] = -g.c.transpose(0, 2, 1)
        # [E^i, E_j] = E^i o ad_{E_j}: coefficient of E^l is c[j, l, i]
        c[n:, :n, n:] = g.c.transpose(2, 0, 1)
        names = g.names + tuple(f"{s}*" for s in g.names)
        object.__setattr__(self, "algebra", LieAlgebra(c, names))

    @property
    def dim(self) -> int:
        return 2 * self.base.dim

    @property
    def exact(self) -> bool:
        return self.base.exact

    @property
    def c(self) -> np.ndarray:
        return self.algebra.c

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.algebra.bracket(u, v)

    def pairing_invariance_defect(self) -> np.ndarray:
        """<[u, v], w> + <v, [u, w]> over basis triples."""
        q = pairing_matrix(self.base.dim, self.exact)
        # t[u, v, w] = <[e_u, e_v], e_w>
        t = np.tensordot(self.c, q, axes=(2, 0))
        return t + t.transpose(0, 2, 1)


def cotangent_double(g: LieAlgebra) -> DoubleAlgebra:
    return DoubleAlgebra(g)


def _check_dims(d: DoubleAlgebra, mat: np.ndarray) -> None:
    if mat.shape != (d.dim, d.dim):
        raise ValueError(f"structure of size {mat.shape[0]} does not act on a double of dimension {d.dim}")


def _entries_for(d: DoubleAlgebra, mat: np.ndarray):
    if la.is_exact(mat) and not d.exact:
        raise la.ModeError("exact structure on a float algebra")
    if d.exact and not la.is_exact(mat):
        return [(i, j, k, float(x)) for i, j, k, x in d.algebra.entries], la.floating(d.c)
    return d.algebra.entries, d.c


def _pair_with_basis(x: np.ndarray) -> np.ndarray:
    """<x, e_c> along the last axis."""
    m = x.shape[-1] // 2
    return np.concatenate([x[..., m:], x[..., :m]], axis=-1) / 2


def nijenhuis(d: DoubleAlgebra, s: GenStructure | np.ndarray) -> np.ndarray:
    """N[a, b, c] = <[SU, SV] - S[SU, V] - S[U, SV] - [U, V], W> on basis vectors.

    Asserts total skew-symmetry of the result.
    """
    mat = s.mat if isinstance(s, GenStructure) else np.asarray(s)
    _check_dims(d, mat)
    entries, c = _entries_for(d, mat)
    n = d.dim
    ex = la.is_exact(mat)
    shape = (n, n, n)
    ss = la.zeros(shape, True) if ex else np.zeros(shape, dtype=np.result_type(mat, float))
    mixed = ss.copy()
    for i, j, k, x in entries:
        # S e_a is column a of S
        ss[:, :, k] += x * np.outer(mat[i, :], mat[j, :])
        mixed[:, j, k] += x * mat[i, :]     # [S e_a, e_j]
        mixed[i, :, k] += x * mat[j, :]     # [e_i, S e_b]
    ks = sorted({k for _, _, k, _ in entries})
    inner = ss - c
    if ks:
        inner = inner - np.tensordot(mixed[:, :, ks], mat[:, ks], axes=(2, 1))
    out = _pair_with_basis(inner)
    tol = _skew_tol(out)
    assert la.is_zero(out + out.transpose(1, 0, 2), tol) and \
        la.is_zero(out + out.transpose(0, 2, 1), tol), "Nijenhuis tensor is not totally skew"
    return out


def _skew_tol(n: np.ndarray):
    if la.is_exact(n):
        return None
    return la.eps_or_default(None) * max(1.0, la.max_abs(n))


def nijenhuis_value(d: DoubleAlgebra, mat: np.ndarray, u, v, w):
    """N(u, v, w) for arbitrary (possibly complex) vectors."""
    mat = np.asarray(mat)
    _check_dims(d, mat)
    br = d.bracket
    su, sv = mat @ u, mat @ v
    x = br(su, sv) - mat @ br(su, v) - mat @ br(u, sv) - br(u, v)
    return np.dot(_pair_with_basis(x), w)


def is_integrable(d: DoubleAlgebra, s: GenStructure | np.ndarray, eps: float | None = None) -> bool:
    return la.is_zero(nijenhuis(d, s), eps)


def nonzero_nijenhuis_entries(d: DoubleAlgebra, s, eps: float | None = None, limit: int = 10):
    """First few (a, b, c, value) with a < b < c where N does not vanish."""
    n = nijenhuis(d, s)
    out = []
    for a, b, c in itertools.combinations(range(d.dim), 3):
        if not la.scalar_is_zero(n[a, b, c], eps):
            out.append((a, b, c, n[a, b, c]))
            if len(out) >= limit:
                break
    return out


def exterior_derivative(g: LieAlgebra, b: TwoForm) -> np.ndarray:
    """dB[i, j, k] = -B([e_i, e_j], e_k) - B([e_j, e_k], e_i) - B([e_k, e_i], e_j)."""
    if b.dim_v != g.dim:
        raise ValueError("dimension mismatch")
    c = g.c
    if la.is_exact(c) and not la.is_exact(b.mat):
        c = la.floating(c)
    la.same_mode(c, b.mat)
    # B(x, y) = y^T mat x, so B([e_i, e_j], e_k) = sum_l c[i, j, l] mat[k, l]
    t = np.tensordot(c, b.mat, axes=(2, 1))  # (i, j, k)
    return -(t + t.transpose(2, 0, 1) + t.transpose(1, 2, 0))


def closed_2form_check(g: LieAlgebra, b: TwoForm, eps: float | None = None) -> bool:
    return la.is_zero(exterior_derivative(g, b), eps)
