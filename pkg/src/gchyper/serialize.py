"""JSON encodings of structures, forms, Lie algebras and reports.

Exact scalars are written as ``"p/q"`` strings and floats as JSON numbers.
Index lists (form subsets, bracket indices) are 1-based unless the object
carries an ``"index_base"`` field.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from . import linalg as la
from .gcs import Bivector, GenStructure, TwoForm
from .lie import LieAlgebra, parse_structure_equations
from .spinor import MixedForm


class FormatError(ValueError):
    pass


def scalar_out(x):
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return str(Fraction(x))
    if isinstance(x, la.GaussRational):
        if x.im != 0:
            raise FormatError("complex scalar in a real field")
        return str(x.re)
    return float(x)


def scalar_in(x, mode: str = "auto"):
    """Parse a JSON scalar; ``mode`` is 'exact', 'float' or 'auto'."""
    if isinstance(x, bool) or not isinstance(x, (str, int, float)):
        raise FormatError(f"not a scalar: {x!r}")
    if mode == "float":
        try:
            return float(Fraction(x)) if isinstance(x, str) else float(x)
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"not a number: {x!r}") from None
    try:
        if isinstance(x, float):
            return Fraction(str(x)) if mode == "exact" else x
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"not a rational number: {x!r}") from None


def _entries_mode(entries, mode: str) -> str:
    if mode != "auto":
        return mode
    return "float" if any(isinstance(x, float) for x in entries) else "exact"


def matrix_in(obj: dict, size_of_dim, mode: str = "auto") -> np.ndarray:
    try:
        m = int(obj["dim_v"])
        entries = list(obj["entries"])
    except (KeyError, TypeError, ValueError):
        raise FormatError("expected an object with 'dim_v' and 'entries'") from None
    n = size_of_dim(m)
    if len(entries) != n * n:
        raise FormatError(f"expected {n * n} entries for dim_v = {m}, got {len(entries)}")
    mode = _entries_mode(entries, mode)
    vals = [scalar_in(x, mode) for x in entries]
    arr = np.empty(n * n, dtype=object if mode == "exact" else float)
    arr[:] = vals
    return arr.reshape(n, n)


def matrix_out(mat: np.ndarray, dim_v: int) -> dict:
    return {"dim_v": dim_v, "entries": [scalar_out(x) for x in np.asarray(mat).flat]}


def structure_to_json(s: GenStructure) -> dict:
    return matrix_out(s.mat, s.dim_v)


def structure_from_json(obj: dict, mode: str = "auto") -> GenStructure:
    return GenStructure(matrix_in(obj, lambda m: 2 * m, mode))


def matrix_from_json(obj: dict, mode: str = "auto") -> np.ndarray:
    """A 2m x 2m matrix that is not yet known to be generalized complex."""
    return matrix_in(obj, lambda m: 2 * m, mode)


def two_form_to_json(b: TwoForm) -> dict:
    return matrix_out(b.mat, b.dim_v)


def two_form_from_json(obj: dict, mode: str = "auto") -> TwoForm:
    return TwoForm(matrix_in(obj, lambda m: m, mode))


def bivector_to_json(b: Bivector) -> dict:
    return matrix_out(b.mat, b.dim_v)


def bivector_from_json(obj: dict, mode: str = "auto") -> Bivector:
    return Bivector(matrix_in(obj, lambda m: m, mode))


def mixed_form_to_json(rho: MixedForm) -> dict:
    terms = []
    for subset, x in rho.terms():
        if rho.exact:
            re, im = str(x.re), str(x.im)
        else:
            re, im = float(x.real), float(x.imag)
        terms.append({"subset": [i + 1 for i in subset], "re": re, "im": im})
    return {"dim_v": rho.dim_v, "terms": terms}


def mixed_form_from_json(obj: dict, mode: str = "auto") -> MixedForm:
    try:
        m = int(obj["dim_v"])
        raw = list(obj["terms"])
        base = int(obj.get("index_base", 1))
    except (KeyError, TypeError, ValueError):
        raise FormatError("expected an object with 'dim_v' and 'terms'") from None
    scalars = [t.get(k, 0) for t in raw for k in ("re", "im")]
    mode = _entries_mode(scalars, mode)
    terms = {}
    for t in raw:
        subset = tuple(int(i) - base for i in t["subset"])
        re, im = scalar_in(t.get("re", 0), mode), scalar_in(t.get("im", 0), mode)
        terms[subset] = la.GaussRational(re, im) if mode == "exact" else complex(re, im)
    try:
        return MixedForm.from_terms(m, terms, mode == "exact")
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def lie_algebra_to_json(g: LieAlgebra) -> dict:
    brackets = []
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            res = [{"k": k + 1, "coeff": scalar_out(g.c[i, j, k])}
                   for k in range(g.dim) if g.c[i, j, k] != 0]
            if res:
                brackets.append({"i": i + 1, "j": j + 1, "result": res})
    return {"dim": g.dim, "brackets": brackets}


def lie_algebra_from_json(obj: dict, mode: str = "auto") -> LieAlgebra:
    """Either ``{"dim", "brackets"}`` or ``{"dim", "equations": "d e3 = - e1^e2"}``."""
    try:
        n = int(obj["dim"])
        base = int(obj.get("index_base", 1))
    except (KeyError, TypeError, ValueError):
        raise FormatError("expected a Lie algebra object with 'dim'") from None
    if "equations" in obj:
        text = obj["equations"]
        if isinstance(text, list):
            text = "\n".join(text)
        return parse_structure_equations(text, n=n, base=base, exact_mode=(mode != "float"))
    brackets = obj.get("brackets", [])
    coeffs = [r["coeff"] for b in brackets for r in b["result"]]
    mode = _entries_mode(coeffs, mode)
    c = la.zeros((n, n, n), mode == "exact")
    for b in brackets:
        i, j = int(b["i"]) - base, int(b["j"]) - base
        for r in b["result"]:
            k = int(r["k"]) - base
            if not all(0 <= x < n for x in (i, j, k)) or i == j:
                raise FormatError(f"bad bracket indices ({b['i']}, {b['j']}) -> {r['k']}")
            x = scalar_in(r["coeff"], mode)
            c[i, j, k] += x
            c[j, i, k] -= x
    return LieAlgebra(c)


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
