"""Command-line front end.

Exit status: 0 when every check passes, 1 on a failed verification, 2 on
unreadable input or bad parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .examples import (CONVENTIONS, ExampleReport, KodairaThurstonExample, ParameterError,
                       TorusExample, build_kt, build_torus, verify_kt, verify_torus)
from .gcs import GenStructure, is_generalized_complex, type_of
from .hyper import FamilyError, anticommutator_report, build_family, family_typemap
from .lie import JacobiError, cotangent_double, nonzero_nijenhuis_entries
from .serialize import FormatError, dumps, lie_algebra_from_json, matrix_from_json, scalar_out
from .twistor import twistor_type_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    mode: str = "exact"
    epsilon: float = 1e-9
    grid: int = 64
    output: str | None = None
    format: str = "json"
    s2_symplectic: bool = False

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InputError("epsilon must be positive")
        if self.grid < 2:
            raise InputError("grid must be at least 2")

    def conventions(self) -> dict:
        out = dict(CONVENTIONS)
        out["s2_factor"] = "symplectic (+0)" if self.s2_symplectic else "complex (+1)"
        out["epsilon"] = self.epsilon
        out["mode"] = self.mode
        return out


# -- input -----------------------------------------------------------------


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _matrix(obj, cfg: Config) -> np.ndarray:
    return matrix_from_json(obj, "float" if cfg.mode == "float" else "auto")


def _structure(obj, cfg: Config, what: str) -> GenStructure:
    try:
        return GenStructure(_matrix(obj, cfg))
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from None


def _float_params(params, cfg: Config):
    return [float(x) if cfg.mode == "float" else x for x in params]


def _example_family(obj: dict, cfg: Config):
    name = obj.get("example")
    if name == "kt":
        b1, b2 = _float_params((Fraction(str(obj.get("b1", 0))), Fraction(str(obj.get("b2", 1)))), cfg)
        return build_kt(KodairaThurstonExample(b1, b2)).family
    if name == "torus":
        lam = _float_params([Fraction(str(x)) for x in obj["lambda"]], cfg)
        mu = _float_params([Fraction(str(x)) for x in obj["mu"]], cfg)
        return build_torus(TorusExample(tuple(lam), tuple(mu))).family
    raise InputError(f"unknown example {name!r}")


def load_family(obj, cfg: Config):
    """A family from {"pair": [S1, S2]}, {"i1": S1, "i2": S2} or {"example": ...}."""
    if not isinstance(obj, dict):
        raise InputError("expected a JSON object")
    try:
        if "example" in obj:
            return _example_family(obj, cfg)
        if "pair" in obj:
            s1, s2 = obj["pair"]
        elif "i1" in obj and "i2" in obj:
            s1, s2 = obj["i1"], obj["i2"]
        else:
            raise InputError("expected 'pair', 'i1'/'i2' or 'example'")
        return build_family(_structure(s1, cfg, "i1"), _structure(s2, cfg, "i2"), cfg.epsilon)
    except (FormatError, FamilyError, ParameterError, KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None


# -- output ----------------------------------------------------------------


def _emit(text: str, cfg: Config) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _checks_json(checks) -> list[dict]:
    out = []
    for c in checks:
        d = {"name": c.name, "passed": c.passed}
        if c.detail:
            d["detail"] = c.detail
        if c.residual is not None:
            d["residual"] = c.residual
        out.append(d)
    return out


def _report_text(report: ExampleReport, cfg: Config, command: str) -> str:
    if cfg.format == "csv":
        return _csv(["check", "passed", "detail"],
                    [[c.name, "pass" if c.passed else "fail", c.detail] for c in report.checks])
    return dumps({
        "command": command,
        "name": report.name,
        "params": report.params,
        "ok": report.ok,
        "checks": _checks_json(report.checks),
        "findings": report.findings,
        "data": {k: {str(t): n for t, n in v.items()} if isinstance(v, dict) else v
                 for k, v in report.data.items()},
        "conventions": cfg.conventions(),
    })


def _sample_value(x):
    return scalar_out(x) if isinstance(x, Fraction) else float(x)


# -- commands --------------------------------------------------------------


def cmd_verify(path: str, cfg: Config) -> int:
    obj = _read_json(path)
    if not isinstance(obj, dict) or "structure" not in obj:
        raise InputError("expected a bundle with a 'structure' entry")
    report = ExampleReport("verify", {"input": path})
    structures = []
    for key in ("structure", "second"):
        if key not in obj:
            continue
        try:
            mat = _matrix(obj[key], cfg)
        except FormatError as exc:
            raise InputError(f"{key}: {exc}") from None
        gc = is_generalized_complex(mat, cfg.epsilon)
        report.add(f"{key}: square check", gc.squares_to_minus_id,
                   "" if gc.squares_to_minus_id else "square check failed", gc.square_residual)
        report.add(f"{key}: orthogonality check", gc.orthogonal,
                   "" if gc.orthogonal else "orthogonality check failed", gc.orthogonal_residual)
        if gc.ok:
            s = GenStructure(mat)
            structures.append((key, s))
            report.data[f"{key}_type"] = type_of(s, cfg.epsilon)
    if len(structures) == 2:
        (_, s1), (_, s2) = structures
        if s1.dim_v != s2.dim_v:
            raise InputError("structures act on different spaces")
        ac = anticommutator_report(s1, s2, cfg.epsilon)
        report.add("anticommutator is 2p Id with |p| < 1", ac.ok, ac.reason())
        if ac.ok:
            report.data["p"] = _sample_value(ac.p)
    if "algebra" in obj:
        try:
            g = lie_algebra_from_json(obj["algebra"], "float" if cfg.mode == "float" else "auto")
        except (FormatError, JacobiError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"algebra: {exc}") from None
        d = cotangent_double(g)
        for key, s in structures:
            if s.dim_v != g.dim:
                raise InputError(f"{key} has dim V = {s.dim_v} but the algebra has dimension {g.dim}")
            bad = nonzero_nijenhuis_entries(d, s, cfg.epsilon)
            report.add(f"{key}: Nijenhuis tensor vanishes", not bad,
                       "; ".join(f"N({a + 1},{b + 1},{c + 1}) = {v}" for a, b, c, v in bad))
    _emit(_report_text(report, cfg, "verify"), cfg)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_typemap(path: str, cfg: Config) -> int:
    fam = load_family(_read_json(path), cfg)
    tm = family_typemap(fam, cfg.grid, cfg.epsilon)
    rows = [[_sample_value(s.a), _sample_value(s.b), _sample_value(s.c), s.type] for s in tm.samples]
    if cfg.format == "csv":
        _emit(_csv(["a", "b", "c", "type"], rows), cfg)
    else:
        _emit(dumps({
            "dim_v": tm.dim_v,
            "grid": cfg.grid,
            "samples": [dict(zip(("a", "b", "c", "type"), r)) for r in rows],
            "histogram": {str(k): v for k, v in tm.histogram().items()},
            "conventions": cfg.conventions(),
        }), cfg)
    return EXIT_OK


def cmd_twistor_report(path: str, cfg: Config) -> int:
    fam = load_family(_read_json(path), cfg)
    rep = twistor_type_report(fam, cfg.grid, cfg.s2_symplectic, cfg.epsilon)
    rows = [[_sample_value(s.a), _sample_value(s.b), _sample_value(s.c), s.fiber_type, s.twistor_type]
            for s in rep.samples]
    if cfg.format == "csv":
        _emit(_csv(["a", "b", "c", "fiber_type", "twistor_type"], rows), cfg)
    else:
        _emit(dumps({
            "samples": [dict(zip(("a", "b", "c", "fiber_type", "twistor_type"), r)) for r in rows],
            "summary": {"min_twistor_type": rep.min_twistor_type,
                        "max_twistor_type": rep.max_twistor_type,
                        "regime": rep.regime},
            "conventions": cfg.conventions(),
        }), cfg)
    return EXIT_OK


def _parse_list(text: str) -> list:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected comma-separated rationals, got {text!r}") from None


def _parse_scalar(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected a rational number, got {text!r}") from None


def cmd_example(args, cfg: Config) -> int:
    try:
        if args.name == "kt":
            b1, b2 = _float_params((_parse_scalar(args.b1), _parse_scalar(args.b2)), cfg)
            report = verify_kt(KodairaThurstonExample(b1, b2), args.grid or 16, cfg.epsilon)
        else:
            lam = _float_params(_parse_list(args.lam), cfg)
            mu = _float_params(_parse_list(args.mu), cfg)
            report = verify_torus(TorusExample(tuple(lam), tuple(mu)), args.grid or cfg.grid,
                                  cfg.epsilon)
    except (ParameterError, FamilyError) as exc:
        raise InputError(str(exc)) from None
    _emit(_report_text(report, cfg, "example"), cfg)
    return EXIT_OK if report.ok else EXIT_FAIL


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["exact", "float"], default="exact",
                        help="arithmetic for inputs that allow it (default: exact)")
    common.add_argument("--epsilon", type=float, default=1e-9,
                        help="tolerance for float comparisons (default: 1e-9)")
    common.add_argument("--output", "-o", default=None, help="write here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--s2-symplectic", action="store_true",
                        help="give the sphere factor its symplectic form (adds 0 to the type)")

    ap = argparse.ArgumentParser(prog="gchyper",
                                 description="Verify generalized complex and hypercomplex structures.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a structure bundle")
    p.add_argument("input")
    p.add_argument("--grid", type=int, default=64)

    for name, helptext in (("typemap", "type of every sampled family member"),
                           ("twistor-report", "fiber and twistor types with a regime summary")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input")
        p.add_argument("--grid", type=int, default=64, help="sphere sample size ~ grid^2")

    p = sub.add_parser("example", parents=[common], help="verify one of the built-in examples")
    p.add_argument("name", choices=["kt", "torus"])
    p.add_argument("--b1", default="0")
    p.add_argument("--b2", default="1")
    p.add_argument("--lambda", dest="lam", default="3/5,1")
    p.add_argument("--mu", default="4/5,0")
    p.add_argument("--grid", type=int, default=None,
                   help="sphere sample size (default 16 for kt, 64 for torus)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = Config(args.mode, args.epsilon, args.grid if args.grid is not None else 64,
                     args.output, args.format, args.s2_symplectic)
        if args.command == "verify":
            return cmd_verify(args.input, cfg)
        if args.command == "typemap":
            return cmd_typemap(args.input, cfg)
        if args.command == "twistor-report":
            return cmd_twistor_report(args.input, cfg)
        return cmd_example(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
