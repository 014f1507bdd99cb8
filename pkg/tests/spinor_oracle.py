"""Slow reference implementation of forms and the Clifford action with sympy scalars."""

from __future__ import annotations

import itertools

import sympy

from gchyper import linalg as la


def to_sym(x):
    if isinstance(x, la.GaussRational):
        return sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(
            x.im.numerator, x.im.denominator)
    return sympy.nsimplify(x)


def from_mixed(rho) -> dict:
    return {subset: to_sym(c) for subset, c in rho.terms()}


def _insert(i: int, subset: tuple):
    """Sign and result of e^i ^ e^subset (None when i already present)."""
    if i in subset:
        return None
    sign = (-1) ** sum(1 for j in subset if j < i)
    return sign, tuple(sorted(subset + (i,)))


def _remove(i: int, subset: tuple):
    if i not in subset:
        return None
    sign = (-1) ** sum(1 for j in subset if j < i)
    return sign, tuple(j for j in subset if j != i)


def act(vec, covec, form: dict) -> dict:
    out: dict = {}
    for subset, c in form.items():
        for i, x in enumerate(vec):
            r = _remove(i, subset)
            if r and x != 0:
                out[r[1]] = out.get(r[1], 0) + r[0] * x * c
        for i, x in enumerate(covec):
            r = _insert(i, subset)
            if r and x != 0:
                out[r[1]] = out.get(r[1], 0) + r[0] * x * c
    return {k: sympy.expand(v) for k, v in out.items() if sympy.expand(v) != 0}


def subsets(m: int):
    for k in range(m + 1):
        yield from itertools.combinations(range(m), k)


def annihilator_dim(form: dict, m: int) -> int:
    rows = list(subsets(m))
    cols = []
    for a in range(2 * m):
        vec = [1 if a == i else 0 for i in range(m)]
        covec = [1 if a == m + i else 0 for i in range(m)]
        img = act(vec, covec, form)
        cols.append([img.get(s, 0) for s in rows])
    mat = sympy.Matrix(cols).T
    return 2 * m - mat.rank()


def plus_i_space(struct_mat) -> list:
    s = sympy.Matrix([[to_sym(x) for x in row] for row in struct_mat])
    return (s - sympy.I * sympy.eye(s.shape[0])).nullspace()


def pure_spinor_by_solving(struct_mat, m: int) -> dict:
    """Forms killed by every +i-eigenvector, found as the kernel of a linear system."""
    basis_forms = list(subsets(m))
    index = {s: k for k, s in enumerate(basis_forms)}
    mat = []
    for v in plus_i_space(struct_mat):
        block = sympy.zeros(len(basis_forms), len(basis_forms))
        for col, s in enumerate(basis_forms):
            for t, c in act(list(v[:m]), list(v[m:]), {s: 1}).items():
                block[index[t], col] += c
        mat.append(block)
    kernel = sympy.Matrix.vstack(*mat).nullspace()
    assert len(kernel) == 1, f"expected a line of pure spinors, got dimension {len(kernel)}"
    k = kernel[0]
    return {s: sympy.simplify(k[index[s]]) for s in basis_forms if sympy.simplify(k[index[s]]) != 0}


def lowest_degree(form: dict) -> int:
    return min(len(s) for s in form)


def proportional(a: dict, b: dict) -> bool:
    keys = sorted(set(a) | set(b))
    if set(a) != set(b):
        return False
    k0 = keys[0]
    ratio = a[k0] / b[k0]
    return all(sympy.simplify(a[k] - ratio * b[k]) == 0 for k in keys)
