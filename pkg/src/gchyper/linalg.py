"""Dense linear algebra over exact rationals or floats.

Matrices are plain numpy arrays. The dtype is the mode: ``object`` arrays hold
``Fraction`` (real) or ``GaussRational`` (complex) entries and are exact;
``float64``/``complex128`` arrays are float mode and compare against a
tolerance.  Exact and float arrays are never combined implicitly; the helpers
below raise :class:`ModeError` instead.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

#: Default tolerance for float-mode comparisons.
EPSILON = 1e-9


class ModeError(TypeError):
    """Raised when exact and float data would be mixed."""


def eps_or_default(eps: float | None) -> float:
    return EPSILON if eps is None else eps


def set_epsilon(eps: float) -> None:
    global EPSILON
    if not eps > 0:
        raise ValueError(f"epsilon must be positive, got {eps!r}")
    EPSILON = float(eps)


class GaussRational:
    """Exact complex scalar ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_fraction(re)
        self.im = to_fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussRational):
            return other
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return GaussRational(other, 0)
        if isinstance(other, bool):
            return GaussRational(int(other), 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.im == 0:
            return GaussRational(self.re * o.re, self.im * o.re)
        if self.im == 0:
            return GaussRational(self.re * o.re, self.re * o.im)
        return GaussRational(self.re * o.re - self.im * o.im,
                             self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.im == 0:
            return GaussRational(self.re / o.re, self.im / o.re)
        n = o.re * o.re + o.im * o.im
        return GaussRational((self.re * o.re + self.im * o.im) / n,
                             (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"



def to_fraction(x) -> Fraction:
    """Convert int/Fraction/"p/q" string to Fraction; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)) and float(x).is_integer():
        return Fraction(int(x))
    raise ModeError(f"cannot use {x!r} ({type(x).__name__}) as an exact scalar")


IMAG = GaussRational(0, 1)


def exact(rows) -> np.ndarray:
    """Exact real matrix (or vector) from nested sequences of rationals."""
    arr = np.asarray(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = to_fraction(x)
    return out


def exact_complex(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = x if isinstance(x, GaussRational) else GaussRational(x)
    return out


def floating(rows) -> np.ndarray:
    arr = np.asarray(rows)
    if arr.dtype == object:
        if any(isinstance(x, GaussRational) for x in arr.flat):
            return np.array([complex(x) for x in arr.flat],
                            dtype=complex).reshape(arr.shape)
        return arr.astype(float)
    if np.iscomplexobj(arr):
        return arr.astype(complex)
    return arr.astype(float)


def is_exact(m: np.ndarray) -> bool:
    return np.asarray(m).dtype == object


def is_complex(m: np.ndarray) -> bool:
    m = np.asarray(m)
    if m.dtype == object:
        return any(isinstance(x, GaussRational) for x in m.flat)
    return np.iscomplexobj(m)


def same_mode(*mats: np.ndarray) -> bool:
    """Return True when all matrices are exact, raise when exact meets float."""
    modes = {is_exact(m) for m in mats}
    if len(modes) > 1:
        raise ModeError("exact and float matrices cannot be combined")
    return modes.pop() if modes else True


def identity(n: int, exact_mode: bool = True) -> np.ndarray:
    if not exact_mode:
        return np.eye(n)
    out = np.full((n, n), Fraction(0), dtype=object)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def zeros(shape, exact_mode: bool = True) -> np.ndarray:
    if not exact_mode:
        return np.zeros(shape)
    return np.full(shape, Fraction(0), dtype=object)


def like(m: np.ndarray, rows) -> np.ndarray:
    """Build a matrix in the same mode as ``m``."""
    return exact(rows) if is_exact(m) else floating(rows)


def scalar_like(m: np.ndarray, x):
    if is_exact(m):
        return to_fraction(x)
    return float(x)


def complexify(m: np.ndarray) -> np.ndarray:
    if is_exact(m):
        return exact_complex(m)
    return np.asarray(m, dtype=complex)


def conj(m: np.ndarray) -> np.ndarray:
    if is_exact(m):
        out = np.empty(m.shape, dtype=object)
        for idx, x in np.ndenumerate(m):
            out[idx] = x.conjugate() if isinstance(x, GaussRational) else x
        return out
    return np.conj(m)


def imag_unit(exact_mode: bool):
    return IMAG if exact_mode else 1j


def scalar_is_zero(x, eps: float | None = None) -> bool:
    if isinstance(x, (Fraction, GaussRational, int)):
        return x == 0
    return abs(x) <= eps_or_default(eps)


def max_abs(m: np.ndarray) -> float:
    """Largest entry modulus, as a float residual."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    if m.dtype == object:
        return max(abs(complex(x)) for x in m.flat)
    return float(np.max(np.abs(m)))


def is_zero(m: np.ndarray, eps: float | None = None) -> bool:
    m = np.asarray(m)
    if m.dtype == object:
        return all(x == 0 for x in m.flat)
    return max_abs(m) <= eps_or_default(eps)


def equal(a: np.ndarray, b: np.ndarray, eps: float | None = None) -> bool:
    same_mode(a, b)
    if a.shape != b.shape:
        return False
    return is_zero(a - b, eps)


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            for j in range(c + 1, ncols):
                ri[j] = (ri[j] * pr[c] - f * pr[j]) // prev
            ri[c] = 0
        prev = pr[c]
        r += 1
    return r


def _float_rank(m: np.ndarray, eps: float) -> int:
    a = np.array(m, dtype=complex if np.iscomplexobj(m) else float)
    nrows, ncols = a.shape
    r = 0
    while r < min(nrows, ncols):
        sub = np.abs(a[r:, r:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= eps:
            break
        i += r
        j += r
        a[[r, i]] = a[[i, r]]
        a[:, [r, j]] = a[:, [j, r]]
        a[r + 1:] -= np.outer(a[r + 1:, r] / a[r, r], a[r])
        r += 1
    return r


def rank(m: np.ndarray, eps: float | None = None) -> int:
    """Matrix rank: exact via Bareiss elimination, float via full pivoting."""
    m = np.asarray(m)
    if m.ndim != 2 or m.size == 0:
        return 0
    if m.dtype != object:
        return _float_rank(m, eps_or_default(eps))
    if any(isinstance(x, GaussRational) for x in m.flat):
        return len(_rref(m, eps)[1])
    rows = []
    for row in m:
        fr = [to_fraction(x) for x in row]
        scale = _lcm(x.denominator for x in fr)
        rows.append([int(x * scale) for x in fr])
    return _bareiss_rank(rows)


def _rref(m: np.ndarray, eps: float | None = None):
    """Reduced row echelon form and pivot columns (exact or float)."""
    a = np.array(m, dtype=object if m.dtype == object else
                 (complex if np.iscomplexobj(m) else float))
    exact_mode = a.dtype == object
    tol = eps_or_default(eps)
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        if exact_mode:
            piv = next((i for i in range(r, nrows) if a[i, c] != 0), None)
        else:
            i = r + int(np.argmax(np.abs(a[r:, c])))
            piv = i if abs(a[i, c]) > tol else None
            if piv is None:
                a[r:, c] = 0
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] / a[r, c]
        for i in range(nrows):
            if i != r and not (exact_mode and a[i, c] == 0):
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace(m: np.ndarray, eps: float | None = None) -> list[np.ndarray]:
    """Basis of ker(m) as 1-D arrays; empty list when the kernel is trivial."""
    m = np.asarray(m)
    ncols = m.shape[1]
    a, pivots = _rref(m, eps)
    exact_mode = a.dtype == object
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        if exact_mode:
            v = np.full(ncols, Fraction(0), dtype=object)
            v[f] = Fraction(1)
        else:
            v = np.zeros(ncols, dtype=a.dtype)
            v[f] = 1
        for row, pc in enumerate(pivots):
            v[pc] = -a[row, f]
        basis.append(v)
    return basis


def complex_nullspace(m: np.ndarray, eps: float | None = None) -> list[np.ndarray]:
    """Kernel basis of a (complexified) square matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("complex_nullspace expects a square matrix")
    return nullspace(complexify(m), eps)


def solve_linear(m: np.ndarray, rhs: np.ndarray, eps: float | None = None):
    """A particular solution of ``m @ x = rhs`` or None when inconsistent."""
    m = np.asarray(m)
    rhs = np.asarray(rhs)
    same_mode(m, rhs)
    vector = rhs.ndim == 1
    b = rhs.reshape(-1, 1) if vector else rhs
    if m.shape[0] != b.shape[0]:
        raise ValueError("row count mismatch")
    ncols = m.shape[1]
    aug = np.concatenate([m, b], axis=1)
    a, pivots = _rref(aug, eps)
    if any(p >= ncols for p in pivots):
        return None
    exact_mode = a.dtype == object
    if not exact_mode:
        # rows without a pivot must reduce to zero on the right-hand side
        if len(pivots) < a.shape[0] and not is_zero(a[len(pivots):, ncols:], eps):
            return None
    x = zeros((ncols, b.shape[1]), exact_mode) if exact_mode else \
        np.zeros((ncols, b.shape[1]), dtype=a.dtype)
    if exact_mode and is_complex(aug):
        x = exact_complex(x)
    for row, pc in enumerate(pivots):
        x[pc] = a[row, ncols:]
    return x[:, 0] if vector else x


def inverse(m: np.ndarray, eps: float | None = None) -> np.ndarray:
    m = np.asarray(m)
    n = m.shape[0]
    if m.shape != (n, n) or rank(m, eps) < n:
        raise ValueError("matrix is singular")
    eye = identity(n, is_exact(m))
    if not is_exact(m) and np.iscomplexobj(m):
        eye = eye.astype(complex)
    return solve_linear(m, eye, eps)


def span_rank(vectors: Sequence[np.ndarray], eps: float | None = None) -> int:
    if not vectors:
        return 0
    return rank(np.column_stack(vectors), eps)


def same_span(a: Sequence[np.ndarray], b: Sequence[np.ndarray],
              eps: float | None = None) -> bool:
    ra, rb = span_rank(a, eps), span_rank(b, eps)
    return ra == rb == span_rank(list(a) + list(b), eps)


def block(ul, ur, ll, lr) -> np.ndarray:
    same_mode(ul, ur, ll, lr)
    return np.block([[ul, ur], [ll, lr]])


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    x = to_fraction(x)
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None
