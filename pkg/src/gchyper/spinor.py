"""Forms as spinors: Clifford action, annihilators, purity and the canonical line.

A :class:`MixedForm` on ``V`` with ``dim V = m`` stores ``2**m`` complex
coefficients indexed by bitmask: bit ``i`` set means ``e^i`` is a factor, and
the basis form is ``e^{i1} ^ ... ^ e^{ik}`` with increasing indices.
Exact forms hold :class:`~gchyper.linalg.GaussRational` entries in an object
array, float forms a ``complex128`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd

import numpy as np

from . import linalg as la
from .gcs import Bivector, GenStructure, TwoForm, pairing

MAX_DIM = 12


def _popcount(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


@lru_cache(maxsize=None)
def _tables(m: int):
    masks = np.arange(1 << m, dtype=np.int64)
    per_index = []
    for i in range(m):
        bit = 1 << i
        sign = 1 - 2 * (_popcount(masks & (bit - 1)) % 2)
        has = (masks & bit) != 0
        with_i = np.nonzero(has)[0]
        without_i = np.nonzero(~has)[0]
        per_index.append((bit, with_i, sign[with_i], without_i, sign[without_i]))
    degrees = _popcount(masks)
    full = (1 << m) - 1
    # sign of e^S ^ e^{S^c} relative to the volume form
    top_sign = np.ones(1 << m, dtype=np.int64)
    for s in range(1 << m):
        inversions = 0
        for i in range(m):
            if s >> i & 1:
                inversions += _popcount(np.array((full ^ s) & ((1 << i) - 1)))
        top_sign[s] = -1 if inversions % 2 else 1
    order = sorted(range(1 << m), key=lambda s: (degrees[s], s))
    return per_index, degrees, top_sign, np.array(order)


def _check_dim(m: int) -> None:
    if m > MAX_DIM:
        raise ValueError(f"spinor computations are capped at dim V <= {MAX_DIM}")


@dataclass(frozen=True, eq=False)
class MixedForm:
    """Complex mixed-degree form on V."""

    dim_v: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_dim(self.dim_v)
        c = np.asarray(self.coeffs)
        if c.shape != (1 << self.dim_v,):
            raise ValueError("coefficient vector must have length 2**dim_v")
        if la.is_exact(c):
            c = la.exact_complex(c)
        else:
            c = c.astype(complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, m: int, exact_mode: bool = True) -> "MixedForm":
        if exact_mode:
            return cls(m, la.exact_complex(np.zeros(1 << m, dtype=object) + 0))
        return cls(m, np.zeros(1 << m, dtype=complex))

    @classmethod
    def from_terms(cls, m: int, terms: dict, exact_mode: bool = True) -> "MixedForm":
        """``{(i, j, ...): coeff}`` with 0-based increasing indices."""
        c = cls.zero(m, exact_mode).coeffs.copy()
        for subset, coeff in terms.items():
            idx = sorted(subset)
            if len(set(idx)) != len(idx) or any(not 0 <= i < m for i in idx):
                raise ValueError(f"bad index set {subset!r}")
            mask = sum(1 << i for i in idx)
            sign = _permutation_sign(list(subset))
            c[mask] = c[mask] + sign * (coeff if not exact_mode or isinstance(coeff, la.GaussRational)
                                        else la.GaussRational(coeff))
        return cls(m, c)

    @property
    def exact(self) -> bool:
        return la.is_exact(self.coeffs)

    def __add__(self, other: "MixedForm") -> "MixedForm":
        la.same_mode(self.coeffs, other.coeffs)
        return MixedForm(self.dim_v, self.coeffs + other.coeffs)

    def __sub__(self, other: "MixedForm") -> "MixedForm":
        la.same_mode(self.coeffs, other.coeffs)
        return MixedForm(self.dim_v, self.coeffs - other.coeffs)

    def scale(self, s) -> "MixedForm":
        return MixedForm(self.dim_v, self.coeffs * s)

    def conjugate(self) -> "MixedForm":
        return MixedForm(self.dim_v, la.conj(self.coeffs))

    def is_zero(self, eps: float | None = None) -> bool:
        return la.is_zero(self.coeffs, eps)

    def degree_part(self, k: int) -> "MixedForm":
        _, degrees, _, _ = _tables(self.dim_v)
        c = self.coeffs.copy()
        c[degrees != k] = 0
        return MixedForm(self.dim_v, c)

    def support_degrees(self, eps: float | None = None) -> list[int]:
        _, degrees, _, _ = _tables(self.dim_v)
        tol = _relative_tol(self.coeffs, eps)
        return sorted({int(degrees[s]) for s, x in enumerate(self.coeffs)
                       if not _negligible(x, tol)})

    def lowest_degree(self, eps: float | None = None) -> int | None:
        degs = self.support_degrees(eps)
        return degs[0] if degs else None

    def terms(self):
        """Nonzero ``(subset, coeff)`` pairs in (degree, mask) order."""
        _, _, _, order = _tables(self.dim_v)
        for s in order:
            x = self.coeffs[s]
            if x != 0:
                yield tuple(i for i in range(self.dim_v) if s >> i & 1), x

    def proportional_to(self, other: "MixedForm", eps: float | None = None) -> bool:
        """True when both forms span the same complex line."""
        return la.span_rank([self.coeffs, other.coeffs], eps) == 1


def _permutation_sign(seq: list[int]) -> int:
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def _relative_tol(coeffs: np.ndarray, eps: float | None):
    if la.is_exact(coeffs):
        return None
    return la.eps_or_default(eps) * max(1.0, la.max_abs(coeffs))


def _negligible(x, tol) -> bool:
    return x == 0 if tol is None else abs(x) <= tol


@dataclass(frozen=True)
class CliffordElement:
    """X + xi in (V + V*) (x) C."""

    vec: np.ndarray
    covec: np.ndarray

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "CliffordElement":
        m = len(v) // 2
        return cls(np.asarray(v[:m]), np.asarray(v[m:]))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.vec, self.covec])


def _as_element(e) -> CliffordElement:
    return e if isinstance(e, CliffordElement) else CliffordElement.from_vector(np.asarray(e))


def _contract(i: int, c: np.ndarray, out: np.ndarray, factor) -> None:
    bit, with_i, s_with, _, _ = _tables_for(c)[i]
    out[with_i ^ bit] += factor * (s_with * c[with_i])


def _wedge(i: int, c: np.ndarray, out: np.ndarray, factor) -> None:
    bit, _, _, without_i, s_without = _tables_for(c)[i]
    out[without_i | bit] += factor * (s_without * c[without_i])


def _tables_for(c: np.ndarray):
    m = len(c).bit_length() - 1
    return _tables(m)[0]


def _empty_like(c: np.ndarray) -> np.ndarray:
    if la.is_exact(c):
        return la.exact_complex(np.zeros(len(c), dtype=object) + 0)
    return np.zeros(len(c), dtype=complex)


def clifford_act(e, rho: MixedForm) -> MixedForm:
    """(X + xi) . rho = iota_X rho + xi ^ rho."""
    e = _as_element(e)
    m = rho.dim_v
    if len(e.vec) != m or len(e.covec) != m:
        raise ValueError("dimension mismatch between Clifford element and form")
    la.same_mode(e.vec, rho.coeffs)
    c = rho.coeffs
    out = _empty_like(c)
    for i in range(m):
        if e.vec[i] != 0:
            _contract(i, c, out, e.vec[i])
        if e.covec[i] != 0:
            _wedge(i, c, out, e.covec[i])
    return MixedForm(m, out)


def _apply_two_form(mat: np.ndarray, c: np.ndarray) -> np.ndarray:
    """B ^ c for the 2-form with matrix ``mat`` (mat[j, i] = B(e_i, e_j))."""
    m = mat.shape[0]
    out = _empty_like(c)
    for i in range(m):
        for j in range(i + 1, m):
            coeff = mat[j, i]
            if coeff == 0:
                continue
            tmp = _empty_like(c)
            _wedge(j, c, tmp, 1)
            _wedge(i, tmp, out, coeff)
    return out


def _apply_bivector(mat: np.ndarray, c: np.ndarray) -> np.ndarray:
    """sum_{i<j} beta^{ij} iota_{e_j} iota_{e_i} c, with beta^{ij} = mat[j, i]."""
    m = mat.shape[0]
    out = _empty_like(c)
    for i in range(m):
        for j in range(i + 1, m):
            coeff = mat[j, i]
            if coeff == 0:
                continue
            tmp = _empty_like(c)
            _contract(i, c, tmp, 1)
            _contract(j, tmp, out, coeff)
    return out


def _exp_series(step, c: np.ndarray, m: int) -> np.ndarray:
    total = c.copy()
    term = c
    for k in range(1, m // 2 + 1):
        term = step(term)
        if la.is_exact(c):
            total = total + term * Fraction(1, factorial(k))
        else:
            total = total + term / factorial(k)
    return total


def exp_two_form(b: TwoForm | np.ndarray, rho: MixedForm, factor=1) -> MixedForm:
    """exp(factor * B) ^ rho."""
    mat = b.mat if isinstance(b, TwoForm) else np.asarray(b)
    if mat.shape[0] != rho.dim_v:
        raise ValueError("dimension mismatch")
    if la.is_exact(rho.coeffs):
        mat = la.exact_complex(mat) * (factor if isinstance(factor, la.GaussRational)
                                       else la.GaussRational(factor))
    else:
        mat = la.floating(mat) * factor
    return MixedForm(rho.dim_v, _exp_series(lambda c: _apply_two_form(mat, c),
                                            rho.coeffs, rho.dim_v))


def beta_on_spinor(beta: Bivector, rho: MixedForm) -> MixedForm:
    """iota_{exp(beta)} rho."""
    if beta.dim_v != rho.dim_v:
        raise ValueError("dimension mismatch")
    la.same_mode(beta.mat, rho.coeffs)
    return MixedForm(rho.dim_v, _exp_series(lambda c: _apply_bivector(beta.mat, c),
                                            rho.coeffs, rho.dim_v))


def exp_i_omega(w: TwoForm) -> MixedForm:
    """exp(i omega) as a mixed form."""
    m = w.dim_v
    one = MixedForm.from_terms(m, {(): 1}, la.is_exact(w.mat))
    return exp_two_form(w, one, la.imag_unit(la.is_exact(w.mat)))


def action_matrix(rho: MixedForm) -> np.ndarray:
    """Columns are e_a . rho for the 2m basis vectors of V + V*."""
    m = rho.dim_v
    cols = []
    for a in range(2 * m):
        c = rho.coeffs
        out = _empty_like(c)
        if a < m:
            _contract(a, c, out, 1)
        else:
            _wedge(a - m, c, out, 1)
        cols.append(out)
    return np.column_stack(cols)


def annihilator(rho: MixedForm, eps: float | None = None) -> list[np.ndarray]:
    """Basis of L_rho = {v : v . rho = 0}; always isotropic."""
    if rho.is_zero(eps):
        raise ValueError("the zero form has no annihilator line")
    a = action_matrix(rho)
    if not rho.exact:
        # scale-invariant threshold for float forms
        a = a / la.max_abs(rho.coeffs)
    basis = la.nullspace(a, eps)
    for v in basis:
        for w in basis:
            assert la.scalar_is_zero(pairing(v, w), eps), "annihilator is not isotropic"
    return basis


def is_pure(rho: MixedForm, eps: float | None = None) -> bool:
    return len(annihilator(rho, eps)) == rho.dim_v


def mukai_pairing(r1: MixedForm, r2: MixedForm):
    """Top-degree coefficient of sigma(r1) ^ r2."""
    if r1.dim_v != r2.dim_v:
        raise ValueError("dimension mismatch")
    la.same_mode(r1.coeffs, r2.coeffs)
    m = r1.dim_v
    _, degrees, top_sign, _ = _tables(m)
    full = (1 << m) - 1
    sigma = np.where((degrees * (degrees - 1) // 2) % 2 == 1, -1, 1)
    masks = np.arange(1 << m)
    terms = (sigma * top_sign) * r1.coeffs * r2.coeffs[full ^ masks]
    total = terms.sum()
    return total


def plus_i_eigenspace(s: GenStructure, eps: float | None = None) -> list[np.ndarray]:
    n = 2 * s.dim_v
    shifted = la.complexify(s.mat) - la.imag_unit(s.exact) * la.complexify(la.identity(n, s.exact))
    return la.nullspace(shifted, eps)


class NoCanonicalLine(ValueError):
    pass


def _trial_weights(m: int):
    """Generic coefficient vectors first, then every basis form (one of which must work)."""
    n = 1 << m
    yield from (np.ones(n, dtype=np.int64), np.arange(1, n + 1), (np.arange(n) % 7) + 1)
    _, _, _, order = _tables(m)
    for mask in order:
        c = np.zeros(n, dtype=np.int64)
        c[mask] = 1
        yield c


def _gauss_int(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale an exact complex vector to Gaussian integers, as (re, im) int arrays."""
    v = [x if isinstance(x, la.GaussRational) else la.GaussRational(x) for x in v]
    den = la._lcm([x.re.denominator for x in v] + [x.im.denominator for x in v])
    re = np.array([int(x.re * den) for x in v], dtype=object)
    im = np.array([int(x.im * den) for x in v], dtype=object)
    return re, im


def _act_gauss_int(vr, vi, re, im):
    """(X + xi) . rho on Gaussian-integer data; returns the content-reduced result."""
    m = len(vr) // 2
    tabs = _tables(m)[0]
    out_re = np.zeros(len(re), dtype=object)
    out_im = np.zeros(len(im), dtype=object)
    for i in range(m):
        bit, with_i, s_with, without_i, s_without = tabs[i]
        for a, b, src, sgn, dst in ((vr[i], vi[i], with_i, s_with, with_i ^ bit),
                                    (vr[m + i], vi[m + i], without_i, s_without, without_i | bit)):
            if a == 0 and b == 0:
                continue
            cr, ci = re[src] * sgn, im[src] * sgn
            out_re[dst] += cr * a - ci * b
            out_im[dst] += cr * b + ci * a
    return out_re, out_im


def _content_reduce(re, im):
    g = gcd(*(int(x) for x in re), *(int(x) for x in im))
    if g > 1:
        re, im = re // g, im // g
    return re, im


def _exact_generator(basis: list[np.ndarray], m: int):
    scaled = [_gauss_int(v) for v in basis]
    for w in _trial_weights(m):
        re, im = np.array([int(x) for x in w], dtype=object), np.zeros(len(w), dtype=object)
        for vr, vi in reversed(scaled):
            re, im = _content_reduce(*_act_gauss_int(vr, vi, re, im))
            if not (np.any(re != 0) or np.any(im != 0)):
                break
        else:
            for vr, vi in scaled:
                r2, i2 = _act_gauss_int(vr, vi, re, im)
                if np.any(r2 != 0) or np.any(i2 != 0):
                    raise NoCanonicalLine("candidate form is not annihilated by L")
            coeffs = np.array([la.GaussRational(a, b) for a, b in zip(re, im)], dtype=object)
            return MixedForm(m, coeffs)
    return None


def _float_generator(basis: list[np.ndarray], m: int, eps):
    for w in _trial_weights(m):
        cand = MixedForm(m, w.astype(complex))
        for v in reversed(basis):
            cand = clifford_act(v, cand)
            if cand.is_zero(eps):
                break
        else:
            return cand
    return None


def canonical_line(s: GenStructure, eps: float | None = None) -> MixedForm:
    """Generator of the pure-spinor line annihilated by the +i-eigenspace L.

    Since L is isotropic its basis vectors anticommute in the Clifford algebra,
    so ``v_1 ... v_m . phi`` is annihilated by L for every ``phi``; any
    ``phi`` outside the kernel of that product yields a generator.  The
    result is normalised so its first nonzero coefficient in (degree, mask)
    order is 1.
    """
    m = s.dim_v
    _check_dim(m)
    basis = plus_i_eigenspace(s, eps)
    if len(basis) != m:
        raise NoCanonicalLine(f"+i-eigenspace has dimension {len(basis)}, expected {m}")
    _, _, _, order = _tables(m)
    rho = _exact_generator(basis, m) if s.exact else _float_generator(basis, m, eps)
    if rho is None:
        raise NoCanonicalLine("no nonzero annihilated form found")
    tol = _relative_tol(rho.coeffs, eps)
    lead = next(rho.coeffs[k] for k in order if not _negligible(rho.coeffs[k], tol))
    rho = MixedForm(m, rho.coeffs / lead)
    if not s.exact:
        scale = la.max_abs(rho.coeffs)
        for v in basis:
            res = clifford_act(v, rho)
            if la.max_abs(res.coeffs) > la.eps_or_default(eps) * scale * max(1.0, la.max_abs(v)):
                raise NoCanonicalLine("candidate form is not annihilated by L")
    nondeg = mukai_pairing(rho, rho.conjugate())
    tol = None if s.exact else la.eps_or_default(eps) * la.max_abs(rho.coeffs) ** 2
    if la.scalar_is_zero(nondeg, tol):
        raise NoCanonicalLine("Mukai pairing (rho, conj rho) vanishes")
    return rho


def spinor_type(s: GenStructure, eps: float | None = None) -> int:
    """Lowest nonzero degree of the canonical line."""
    return canonical_line(s, eps).lowest_degree(eps)
