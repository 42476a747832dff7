"""Command line: ``agemo validate|compile|compute|explore|verify-paper``.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import catalog
from .algebra import Algebra, AlgebraError
from .config import DEFAULT_HORIZON, DEFAULT_SEED, DEFAULT_WALK_HORIZON
from .field import QQ, Field, parse_field, parse_rational
from .formats import TableFormatError, parse_algebra_table, serialize_algebra
from .quiver import QuiverError, build_path_algebra, parse_quiver

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ALGEBRA_BUILTINS = ("lambda", "lambda_prime", "lambda_dprime", "lambda_tilde")
MODULE_BUILTINS = ("M", "Mprime", "Mi", "left-ideal", "right-ideal", "U", "simple", "regular",
                   "projective")
OPS = ("summary", "ext", "g-status", "tr-profile", "gp", "period", "syzygy", "cosyzygy",
       "transpose", "dual", "torsion", "indecomposable")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# specs

def parse_builtin(text: str) -> Tuple[str, Dict[str, str], int]:
    """``name:key=value,...`` with optional trailing ``*`` (one per dual taken)."""
    t = text.strip()
    duals = len(t) - len(t.rstrip("*"))
    t = t.rstrip("*")
    name, _, rest = t.partition(":")
    args: Dict[str, str] = {}
    if rest:
        for part in rest.split(","):
            key, eq, val = part.partition("=")
            if not eq or not key.strip():
                raise UsageError(f"bad argument {part!r} in {text!r}; expected key=value")
            args[key.strip()] = val.strip()
    if not name:
        raise UsageError(f"empty name in {text!r}")
    return name, args, duals


def _rational(val: str, what: str) -> Fraction:
    try:
        return parse_rational(val)
    except ValueError:
        raise UsageError(f"{what} must be an exact rational, got {val!r}") from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _is_quiver_text(path: str, text: str) -> bool:
    if path.endswith(".quiver"):
        return True
    for raw in text.splitlines():
        toks = raw.split("#", 1)[0].split()
        if toks:
            return toks[0] in ("quiver", "vertex", "arrow", "relation", "param")
    return False


def load_algebra_file(path: str, q: Optional[Fraction], fld: Optional[Field]) -> Algebra:
    text = _read(path)
    if _is_quiver_text(path, text):
        pres = parse_quiver(text, {"q": q} if q is not None and "param q" in text else None)
        if fld is not None:
            pres = dataclasses.replace(pres, field=fld)
        alg, _ = build_path_algebra(pres)
        return alg
    alg = parse_algebra_table(text)
    if fld is not None and fld is not alg.field:
        raise UsageError("--field cannot change the field of an algebra table")
    return alg


def load_algebra(source: str, q: Optional[Fraction], fld: Optional[Field]) -> Algebra:
    name, args, duals = parse_builtin(source)
    if name not in ALGEBRA_BUILTINS:
        if os.path.exists(source):
            return load_algebra_file(source, q, fld)
        if ":" in source or name.isidentifier():
            raise UsageError(f"unknown algebra {source!r}; builtins are {', '.join(ALGEBRA_BUILTINS)}")
        raise UsageError(f"no such file: {source}")
    if duals:
        raise UsageError("'*' applies to modules, not algebras")
    unknown = set(args) - {"q"}
    if unknown:
        raise UsageError(f"unknown parameter(s) {', '.join(sorted(unknown))} for {name}")
    qv = q if q is not None else _rational(args.get("q", "2"), "q")
    fld = fld or QQ
    try:
        if name == "lambda":
            return catalog.make_lambda(qv, fld)
        if name == "lambda_prime":
            return catalog.make_lambda_prime(qv, fld)
        if name == "lambda_tilde":
            return catalog.make_lambda_tilde(qv, fld)
        return catalog.make_lambda_dprime(fld)
    except catalog.CatalogError as exc:
        raise UsageError(str(exc)) from None


def _need(kind: Optional[str], want: str, module: str):
    if kind != want:
        raise UsageError(f"module {module} needs the builtin algebra {want}")


def load_module(a: Algebra, source: str):
    from .modules import LEFT, RIGHT, projective_at, regular_module, simple_module
    from .modules import dual

    name, args, duals = parse_builtin(source)
    info = catalog.catalog_kind(a)
    kind, q = info if info else (None, None)
    fld = a.field
    allowed = {
        "M": {"alpha"}, "Mprime": {"alpha"}, "Mi": {"vertex", "alpha"}, "left-ideal": {"alpha"},
        "right-ideal": {"alpha"}, "U": {"alpha"}, "simple": {"vertex", "side"},
        "regular": {"side"}, "projective": {"vertex", "side"},
    }
    if name not in allowed:
        raise UsageError(f"unknown module {name!r}; builtins are {', '.join(MODULE_BUILTINS)}")
    extra = set(args) - allowed[name]
    if extra:
        raise UsageError(f"unknown parameter(s) {', '.join(sorted(extra))} for {name}")

    def alpha():
        if "alpha" not in args:
            raise UsageError(f"{name} needs alpha=...")
        try:
            return catalog.parse_alpha(args["alpha"])
        except ValueError:
            raise UsageError(f"alpha must be an exact rational or inf, got {args['alpha']!r}") from None

    def side():
        s = args.get("side", LEFT)
        if s not in (LEFT, RIGHT):
            raise UsageError("side must be left or right")
        return s

    def vertex(limit):
        v = args.get("vertex", "0")
        if not v.isdigit() or int(v) >= limit:
            raise UsageError(f"vertex must be an index below {limit}")
        return int(v)

    al = alpha() if "alpha" in allowed[name] else None
    if al == catalog.INFINITY and name != "Mprime":
        raise UsageError("alpha=inf is only defined for Mprime")
    try:
        if name == "M":
            _need(kind, "lambda", name)
            M = catalog.make_M(al, q, fld)
        elif name == "Mprime":
            _need(kind, "lambda_prime", name)
            M = catalog.make_M_prime(al, q, fld)
        elif name == "Mi":
            _need(kind, "lambda_tilde", name)
            if args.get("vertex") not in ("1", "2"):
                raise UsageError("Mi needs vertex=1 or vertex=2")
            M = catalog.make_M_i(int(args["vertex"]), al, q, fld)
        elif name == "left-ideal":
            _need(kind, "lambda", name)
            M = catalog.make_left_ideal_m(al, q, fld)[0]
        elif name == "right-ideal":
            _need(kind, "lambda", name)
            M = catalog.make_right_ideal_m(al, q, fld)[0]
        elif name == "U":
            _need(kind, "lambda", name)
            M = catalog.make_U(al, q, fld)[0]
        elif name == "simple":
            M = simple_module(a, vertex(len(a.idempotents)), side())
        elif name == "regular":
            M = regular_module(a, side())
        else:
            M = projective_at(a, vertex(len(a.idempotents)), side()).module
    except (catalog.CatalogError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    for _ in range(duals):
        M = dual(M)
    return M


# ---------------------------------------------------------------------------
# compute

def _mark(cert) -> str:
    if cert.level == "refuted":
        return "✗" if cert.witness is None else f"✗(i={cert.witness})"
    return "✓(exact)" if cert.level == "exact" else f"✓({cert.horizon})"


def _label(M) -> str:
    return catalog.name_module(M) or M.name or f"X{M.dim}:{M.digest()}"


def compute(M, op: str, horizon: int, seed: int) -> Tuple[dict, str]:
    """``(json-ready dict, text line)`` for one operation."""
    from . import homological as H
    from .modules import is_indecomposable, is_reflexive, is_torsionless

    name = _label(M)
    head = {"module": name, "side": M.side, "dim": M.dim, "op": op}
    if op == "summary":
        data = {"dimension_vector": list(M.dimension_vector()),
                "indecomposable": is_indecomposable(M, seed).status,
                "projective": H.is_projective(M), "torsionless": is_torsionless(M),
                "reflexive": is_reflexive(M)}
        flags = [("" if data[k] else "not ") + k for k in ("projective", "torsionless", "reflexive")]
        text = ", ".join([f"dimension vector {data['dimension_vector']}", data["indecomposable"]] + flags)
    elif op == "ext":
        dims = H.ext_profile(M, horizon, seed=seed).dims
        data = {"horizon": horizon, "ext": dims}
        text = f"Ext^1..{horizon}: " + " ".join(str(d) for d in dims)
    elif op == "g-status":
        st = H.g_status(M, horizon, seed)
        data = st.as_dict()
        text = f"G1 {_mark(st.g1)}, G2 {_mark(st.g2)}, G3 {_mark(st.g3)}"
    elif op == "tr-profile":
        prof = H.tr_profile(M, horizon, seed)
        sat = prof.satisfied()
        data = {"horizon": horizon, "satisfied": sat,
                "failing": [i for i in list(range(-horizon, 0)) + list(range(1, horizon + 1))
                            if i not in sat]}
        text = f"TR_i holds for {sat}"
    elif op == "gp":
        v = H.certify_gp(M, horizon, seed)
        data = v.as_dict()
        text = v.status + (f", period {v.period}" if v.period else "") + (f", {v.witness}" if v.witness else "")
    elif op == "period":
        t = H.omega_period(M, horizon, seed)
        data = {"horizon": horizon, "period": t}
        text = f"Ω-period {t}" if t else f"no Ω-period up to {horizon}"
    elif op == "syzygy":
        from .resolution import free_resolution

        res = free_resolution(M)
        dims = [res.syzygy_dim(t) for t in range(1, horizon + 1)]
        data = {"horizon": horizon, "syzygy_dims": dims}
        text = f"dim Ω^1..{horizon}: " + " ".join(str(d) for d in dims)
    elif op in ("cosyzygy", "transpose", "dual"):
        fn = {"cosyzygy": H.cosyzygy, "transpose": H.transpose, "dual": None}[op]
        if op == "dual":
            from .modules import dual as fn
        X = fn(M)
        data = {"result": _label(X) if X.dim else "0", "result_side": X.side, "result_dim": X.dim}
        text = f"{op}: {data['result']} ({X.side}, dim {X.dim})"
    elif op == "torsion":
        k = H.torsion_dim(M)
        data = {"torsion_dim": k, "torsionless": k == 0, "reflexive": is_reflexive(M)}
        text = f"dim K = {k}, torsionless {k == 0}, reflexive {data['reflexive']}"
    elif op == "indecomposable":
        d = is_indecomposable(M, seed)
        data = {"status": d.status, "reason": d.reason}
        text = f"{d.status} ({d.reason})"
    else:
        raise UsageError(f"unknown op {op!r}; ops are {', '.join(OPS)}")
    return {**head, **data}, f"{name}: {text}"


# ---------------------------------------------------------------------------
# commands

def _field(args) -> Optional[Field]:
    if args.field is None:
        return None
    try:
        return parse_field(args.field)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _q(args) -> Optional[Fraction]:
    return None if args.q is None else _rational(args.q, "--q")


def _emit(args, payload: bytes):
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def _json(obj) -> bytes:
    return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode()


def cmd_validate(args) -> int:
    alg = load_algebra_file(args.path, _q(args), _field(args))
    problems = alg.validate()
    if args.format == "json":
        _emit(args, _json({"algebra": alg.name, "dim": alg.dim, "field": alg.field.name,
                           "valid": not problems, "problems": problems}))
    else:
        lines = [f"{alg.name}: dim {alg.dim} over {alg.field.name}",
                 "valid" if not problems else "invalid"] + [f"  {p}" for p in problems]
        _emit(args, ("\n".join(lines) + "\n").encode())
    return EXIT_OK if not problems else EXIT_FAIL


def cmd_compile(args) -> int:
    alg = load_algebra(args.algebra, _q(args), _field(args))
    _emit(args, serialize_algebra(alg).encode())
    return EXIT_OK


def cmd_compute(args) -> int:
    alg = load_algebra(args.algebra, _q(args), _field(args))
    M = load_module(alg, args.module)
    horizon = args.horizon or DEFAULT_HORIZON
    data, text = compute(M, args.op, horizon, args.seed)
    if args.format == "json":
        _emit(args, _json(data))
    elif args.format == "text":
        _emit(args, (text + "\n").encode())
    else:
        raise UsageError("compute supports --format json or text")
    return EXIT_OK


def cmd_explore(args) -> int:
    from .explorer import WalkError, render_report, walk_component

    alg = load_algebra(args.algebra, _q(args), _field(args))
    M = load_module(alg, args.module)
    h = args.walk_horizon or DEFAULT_WALK_HORIZON
    try:
        r = walk_component(M, h, args.seed, ext_horizon=args.horizon)
    except WalkError as exc:
        raise UsageError(str(exc)) from None
    fmt = "dot" if args.dot else args.format
    _emit(args, render_report(r, fmt))
    return EXIT_OK if r.shape != "unknown" else EXIT_FAIL


def cmd_verify_paper(args) -> int:
    from .verify import run_claims

    q = _q(args)
    q = Fraction(2) if q is None else q
    if q in (0, 1, -1):
        raise UsageError("--q must have infinite multiplicative order (not 0, 1 or -1)")
    if args.format == "dot":
        raise UsageError("verify-paper supports --format json or text")
    live = args.format == "text" and not args.out

    def show(res):
        if live:
            sys.stdout.write(res.line() + "\n")
            sys.stdout.flush()

    results = run_claims(q, args.horizon or DEFAULT_HORIZON, args.walk_horizon or 8,
                         args.tr_horizon, args.seed, progress=show)
    ok = all(r.passed for r in results)
    if args.format == "json":
        _emit(args, _json({"q": str(q), "passed": ok, "claims": [
            {"index": r.index, "title": r.title, "passed": r.passed, "detail": r.detail}
            for r in results]}))
    else:
        summary = f"{sum(r.passed for r in results)}/{len(results)} claims passed\n"
        if live:
            sys.stdout.write(summary)
        else:
            _emit(args, ("".join(r.line() + "\n" for r in results) + summary).encode())
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", help="deformation parameter (exact rational)")
    common.add_argument("--field", help="Q, GF(p), Fp or F<p>")
    common.add_argument("--horizon", type=int, help=f"Ext horizon (default {DEFAULT_HORIZON})")
    common.add_argument("--walk-horizon", type=int,
                        help=f"steps per direction when walking (default {DEFAULT_WALK_HORIZON})")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    # the default depends on the command; argparse shares this action between subparsers
    common.add_argument("--format", choices=("json", "dot", "text"))
    common.add_argument("--out", help="write output to PATH")

    p = argparse.ArgumentParser(prog="agemo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check an algebra table or quiver file")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate, default_format="text")

    s = sub.add_parser("compile", parents=[common], help="print the structure table of an algebra")
    s.add_argument("algebra", help="file or builtin such as lambda:q=2")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("compute", parents=[common], help="run one operation on a module")
    s.add_argument("algebra")
    s.add_argument("module", help="builtin such as M:alpha=3; a trailing * takes the dual")
    s.add_argument("op", help=", ".join(OPS))
    s.set_defaults(func=cmd_compute)

    s = sub.add_parser("explore", parents=[common], help="walk a component of the cosyzygy quiver")
    s.add_argument("algebra")
    s.add_argument("module")
    s.add_argument("--dot", action="store_true", help="same as --format dot")
    s.set_defaults(func=cmd_explore)

    s = sub.add_parser("verify-paper", parents=[common], help="check every claim of the worked example")
    s.add_argument("--tr-horizon", type=int, default=8)
    s.set_defaults(func=cmd_verify_paper, default_format="text")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, "default_format", "json")
    for flag in ("horizon", "walk_horizon"):
        val = getattr(args, flag, None)
        if val is not None and val < 1:
            parser.error(f"--{flag.replace('_', '-')} must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"agemo: error: {exc}\n")
        return EXIT_USAGE
    except (QuiverError, TableFormatError, AlgebraError) as exc:
        sys.stderr.write(f"agemo: error: {args_path(args)}{exc}\n")
        return EXIT_USAGE


def args_path(args) -> str:
    path = getattr(args, "path", None) or getattr(args, "algebra", None)
    return f"{path}: " if path and os.path.exists(path) else ""


if __name__ == "__main__":
    sys.exit(main())
