"""Linear generalized complex structures on V + V*.

A structure is a ``2m x 2m`` matrix acting on column vectors ``(X, xi)`` with
the ``m`` vector coordinates first and the ``m`` covector coordinates second.

Conventions used throughout the package:

* A 2-form ``B`` is stored as the matrix of ``X -> iota_X B`` (so that
  ``mat[l, k] = B(e_k, e_l)``); a bivector ``beta`` as the matrix of
  ``xi -> iota_xi beta``.
* A complex structure ``J`` induces ``diag(J, -J^T)``.
* ``b_transform`` conjugates by ``[[1, 0], [B, 1]]``: ``S -> g S g^{-1}``.
  On spinors this corresponds to ``exp(-B) ^ rho``.
* ``beta_transform`` conjugates by ``[[1, beta], [0, 1]]``, matching
  ``exp(iota_beta)`` on spinors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la


def pairing_matrix(m: int, exact_mode: bool = True) -> np.ndarray:
    """Matrix Q of <X + xi, Y + eta> = (xi(Y) + eta(X)) / 2."""
    half = Fraction(1, 2) if exact_mode else 0.5
    q = la.zeros((2 * m, 2 * m), exact_mode)
    for i in range(m):
        q[i, m + i] = half
        q[m + i, i] = half
    return q


def pairing(u: np.ndarray, v: np.ndarray):
    """Complex-bilinear pairing of two vectors of V + V* (no conjugation)."""
    m = len(u) // 2
    return (np.dot(u[m:], v[:m]) + np.dot(v[m:], u[:m])) / 2


def _frozen(mat: np.ndarray) -> np.ndarray:
    mat = np.array(mat, dtype=mat.dtype)
    mat.setflags(write=False)
    return mat


@dataclass(frozen=True)
class GCReport:
    squares_to_minus_id: bool
    orthogonal: bool
    square_residual: float
    orthogonal_residual: float

    @property
    def ok(self) -> bool:
        return self.squares_to_minus_id and self.orthogonal


def is_generalized_complex(mat: np.ndarray, eps: float | None = None) -> GCReport:
    mat = np.asarray(mat)
    n = mat.shape[0]
    if mat.shape != (n, n) or n % 2:
        raise ValueError(f"expected an even square matrix, got shape {mat.shape}")
    ex = la.is_exact(mat)
    sq = mat @ mat + la.identity(n, ex)
    q = pairing_matrix(n // 2, ex)
    orth = mat.T @ q @ mat - q
    return GCReport(la.is_zero(sq, eps), la.is_zero(orth, eps),
                    la.max_abs(sq), la.max_abs(orth))


class NotGeneralizedComplex(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GenStructure:
    """A verified generalized complex structure on V + V*, dim V = ``dim_v``."""

    mat: np.ndarray
    dim_v: int = field(init=False)

    def __post_init__(self):
        mat = np.asarray(self.mat)
        report = is_generalized_complex(mat)
        if not report.ok:
            what = []
            if not report.squares_to_minus_id:
                what.append(f"square != -Id (residual {report.square_residual:.3g})")
            if not report.orthogonal:
                what.append(f"not pairing-orthogonal (residual {report.orthogonal_residual:.3g})")
            raise NotGeneralizedComplex("; ".join(what))
        object.__setattr__(self, "mat", _frozen(mat))
        object.__setattr__(self, "dim_v", mat.shape[0] // 2)

    @property
    def exact(self) -> bool:
        return la.is_exact(self.mat)

    @property
    def poisson(self) -> np.ndarray:
        """Upper-right block V* -> V."""
        m = self.dim_v
        return self.mat[:m, m:]

    def to_float(self) -> "GenStructure":
        return self if not self.exact else GenStructure(la.floating(self.mat))

    def __neg__(self) -> "GenStructure":
        return GenStructure(-self.mat)

    def __eq__(self, other):
        if not isinstance(other, GenStructure):
            return NotImplemented
        if self.exact != other.exact:
            return False
        return la.equal(self.mat, other.mat)

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"GenStructure(dim_v={self.dim_v}, {mode})"


def _skew(mat: np.ndarray, what: str) -> np.ndarray:
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{what} must be square")
    if not la.is_zero(mat + mat.T):
        raise ValueError(f"{what} must be skew-symmetric")
    return _frozen(mat)


@dataclass(frozen=True, eq=False)
class TwoForm:
    """Real 2-form stored as the matrix of X -> iota_X B."""

    mat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mat", _skew(self.mat, "2-form"))

    @property
    def dim_v(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def from_terms(cls, m: int, terms: dict, exact_mode: bool = True) -> "TwoForm":
        """Build from ``{(i, j): coeff}`` meaning sum coeff * e^i ^ e^j (0-based)."""
        mat = la.zeros((m, m), exact_mode)
        for (i, j), coeff in terms.items():
            c = la.to_fraction(coeff) if exact_mode else float(coeff)
            # (e^i ^ e^j)(e_i, e_j) = 1 and mat[l, k] = B(e_k, e_l)
            mat[j, i] += c
            mat[i, j] -= c
        return cls(mat)

    def evaluate(self, x: np.ndarray, y: np.ndarray):
        """B(x, y)."""
        return y @ self.mat @ x

    def __neg__(self):
        return TwoForm(-self.mat)

    def __add__(self, other):
        return TwoForm(self.mat + other.mat)

    def scale(self, s) -> "TwoForm":
        return TwoForm(self.mat * s)


@dataclass(frozen=True, eq=False)
class Bivector:
    """Real bivector stored as the matrix of xi -> iota_xi beta."""

    mat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mat", _skew(self.mat, "bivector"))

    @property
    def dim_v(self) -> int:
        return self.mat.shape[0]

    def __neg__(self):
        return Bivector(-self.mat)


def from_complex(j: np.ndarray) -> GenStructure:
    j = np.asarray(j)
    m = j.shape[0]
    if j.shape != (m, m) or not la.is_zero(j @ j + la.identity(m, la.is_exact(j))):
        raise ValueError("J must satisfy J^2 = -Id")
    z = la.zeros((m, m), la.is_exact(j))
    return GenStructure(la.block(j, z, z, -j.T))


def from_symplectic(w: TwoForm) -> GenStructure:
    try:
        winv = la.inverse(w.mat)
    except ValueError:
        raise ValueError("symplectic form is degenerate") from None
    m = w.dim_v
    z = la.zeros((m, m), la.is_exact(w.mat))
    return GenStructure(la.block(z, -winv, w.mat, z))


def _b_matrix(m: int, b: np.ndarray) -> np.ndarray:
    ex = la.is_exact(b)
    return la.block(la.identity(m, ex), la.zeros((m, m), ex), b, la.identity(m, ex))


def b_transform(s: GenStructure, b: TwoForm) -> GenStructure:
    """Conjugate by exp(B) = [[1, 0], [B, 1]]."""
    m = s.dim_v
    la.same_mode(s.mat, b.mat)
    g = _b_matrix(m, b.mat)
    ginv = _b_matrix(m, -b.mat)
    return GenStructure(g @ s.mat @ ginv)


def beta_transform(s: GenStructure, beta: Bivector) -> GenStructure:
    """Conjugate by exp(beta) = [[1, beta], [0, 1]]."""
    m = s.dim_v
    la.same_mode(s.mat, beta.mat)
    ex = s.exact
    one, z = la.identity(m, ex), la.zeros((m, m), ex)
    g = la.block(one, beta.mat, z, one)
    ginv = la.block(one, -beta.mat, z, one)
    return GenStructure(g @ s.mat @ ginv)


def gl_transform(s: GenStructure, a: np.ndarray) -> GenStructure:
    """Push forward along A in GL(V), acting as diag(A, A^{-T})."""
    m = s.dim_v
    la.same_mode(s.mat, a)
    ainv = la.inverse(a)
    z = la.zeros((m, m), s.exact)
    g = la.block(a, z, z, ainv.T)
    ginv = la.block(ainv, z, z, a.T)
    return GenStructure(g @ s.mat @ ginv)


def type_of(s: GenStructure, eps: float | None = None) -> int:
    """Type = m/2 - rank(P)/2 with P the Poisson block."""
    r = la.rank(s.poisson, eps)
    if r % 2:
        raise ArithmeticError(f"odd Poisson rank {r}; increase precision")
    return (s.dim_v - r) // 2


def standard_complex(m: int, exact_mode: bool = True) -> np.ndarray:
    """Block-diagonal J with J e_{2i} = e_{2i+1}."""
    if m % 2:
        raise ValueError("dimension must be even")
    j = la.zeros((m, m), exact_mode)
    one = Fraction(1) if exact_mode else 1.0
    for i in range(0, m, 2):
        j[i + 1, i] = one
        j[i, i + 1] = -one
    return j


def standard_symplectic(m: int, exact_mode: bool = True) -> TwoForm:
    """omega = sum e^{2i} ^ e^{2i+1}."""
    if m % 2:
        raise ValueError("dimension must be even")
    return TwoForm.from_terms(m, {(i, i + 1): 1 for i in range(0, m, 2)}, exact_mode)


def split_structure(m: int, k: int, exact_mode: bool = True) -> GenStructure:
    """Complex type on the first 2k coordinates, symplectic on the rest."""
    if m % 2 or not 0 <= k <= m // 2:
        raise ValueError("need even m and 0 <= k <= m/2")
    c = 2 * k
    mat = la.zeros((2 * m, 2 * m), exact_mode)
    if c:
        j = standard_complex(c, exact_mode)
        mat[:c, :c] = j
        mat[m:m + c, m:m + c] = -j.T
    if c < m:
        w = standard_symplectic(m - c, exact_mode).mat
        winv = la.inverse(w)
        mat[c:m, m + c:] = -winv
        mat[m + c:, c:m] = w
    return GenStructure(mat)
