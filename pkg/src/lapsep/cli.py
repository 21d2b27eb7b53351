"""Command-line interface.

Exit codes: 0 separable / success, 1 entangled (or invalid certificate),
2 unknown, 3 invalid input or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import formats
from .classes import classify_membership
from .engine import (
    VerdictKind,
    classify,
    entanglement_witness,
    min_pt_eigenpair,
    separable_decomposition,
    verify_decomposition,
)
from .errors import LapsepError
from .generators import CLASSES, KINDS, generate
from .graph import laplacian_density
from .tensor import partial_transpose

EXIT_SEPARABLE, EXIT_ENTANGLED, EXIT_UNKNOWN, EXIT_INVALID = 0, 1, 2, 3

_EXIT_FOR_KIND = {
    VerdictKind.SEPARABLE: EXIT_SEPARABLE,
    VerdictKind.SEPARABLE_NONCONSTRUCTIVE: EXIT_SEPARABLE,
    VerdictKind.ENTANGLED: EXIT_ENTANGLED,
    VerdictKind.UNKNOWN: EXIT_UNKNOWN,
    VerdictKind.INVALID: EXIT_INVALID,
}


def _num(x: float) -> str:
    return f"{x:.12g}"


def load_density(path, fmt_hint=None):
    """Matrix file or graph file -> (matrix, shape). Graphs become their Laplacian density."""
    kind, payload = formats.load(path, fmt_hint)
    if kind == "graph":
        return laplacian_density(payload), payload.shape
    if kind == "matrix":
        return payload
    raise formats.ParseError(f"{path}: expected a matrix or graph file, got {kind}")


def _emit(report: dict, lines: list[str], as_json: bool):
    if as_json:
        print(json.dumps(report, indent=2, default=str))
    else:
        for line in lines:
            print(line)


def _fail(message: str, as_json: bool, command: str) -> int:
    if as_json:
        print(json.dumps({"command": command, "verdict": "Invalid", "error": message}, indent=2))
    else:
        print(f"error: {message}", file=sys.stderr)
    return EXIT_INVALID


def _summary(v) -> str:
    if v.kind is VerdictKind.SEPARABLE:
        return f"Separable (rule {v.rule}), {len(v.decomposition)} terms"
    if v.kind is VerdictKind.SEPARABLE_NONCONSTRUCTIVE:
        return f"Separable (rule {v.rule}), non-constructive"
    if v.kind is VerdictKind.ENTANGLED:
        return f"Entangled (rule {v.rule}), witness eigenvalue {_num(v.witness.eigenvalue)}"
    if v.kind is VerdictKind.UNKNOWN:
        return "Unknown"
    return f"Invalid: {v.reason}"


def _classify_one(path: str, args) -> tuple[int, dict, list[str]]:
    t0 = time.perf_counter()
    try:
        a, shape = load_density(path, args.format)
    except (OSError, LapsepError, ValueError) as exc:
        return EXIT_INVALID, {"input": path, "verdict": "Invalid", "error": str(exc)}, [f"{path}: error: {exc}"]
    t1 = time.perf_counter()
    v = classify(a, shape, args.tol)
    t2 = time.perf_counter()
    report = {
        "command": "classify",
        "input": path,
        "shape": [shape.p, shape.q],
        "verdict": v.kind.value,
        "rule": v.rule,
        "summary": _summary(v),
        "tol": args.tol,
        "timings": {"parse_s": t1 - t0, "classify_s": t2 - t1},
        "classes": v.report.flags() if v.report else [],
        "diagnostics": v.diagnostics,
        "artifacts": [],
    }
    if v.decomposition is not None:
        report["terms"] = len(v.decomposition)
    if v.witness is not None:
        report["witness"] = {
            "eigenvalue": v.witness.eigenvalue,
            "vector": [[z.real, z.imag] for z in v.witness.vector],
        }
    return _EXIT_FOR_KIND[v.kind], report, [_summary(v)]


def cmd_classify(args) -> int:
    inputs = args.inputs
    if len(inputs) == 1:
        code, report, lines = _classify_one(inputs[0], args)
        _emit(report, lines, args.json)
        return code
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(lambda p: _classify_one(p, args), inputs))
    if args.json:
        print(json.dumps([r for _, r, _ in results], indent=2, default=str))
    else:
        for path, (_, _, lines) in zip(inputs, results):
            print(f"{path}: {lines[0]}")
    return max(code for code, _, _ in results)


def cmd_decompose(args) -> int:
    try:
        a, shape = load_density(args.input, args.format)
    except (OSError, LapsepError, ValueError) as exc:
        return _fail(str(exc), args.json, "decompose")
    v = classify(a, shape, args.tol)
    if v.kind is not VerdictKind.SEPARABLE:
        code = _EXIT_FOR_KIND[v.kind]
        if v.kind is VerdictKind.SEPARABLE_NONCONSTRUCTIVE:
            code = EXIT_UNKNOWN
        _emit({"command": "decompose", "verdict": v.kind.value, "rule": v.rule, "summary": _summary(v)},
              [f"{_summary(v)}; no decomposition written"], args.json)
        return code
    out = Path(args.output)
    out.write_text(formats.write_decomposition(v.decomposition))
    d = formats.read_decomposition(out.read_text())
    valid, err, wsum = verify_decomposition(a, d, args.tol)
    report = {
        "command": "decompose",
        "verdict": v.kind.value,
        "rule": v.rule,
        "terms": len(d),
        "max_error": err,
        "weight_sum": wsum,
        "tol": args.tol,
        "artifacts": [str(out)],
    }
    _emit(report, [_summary(v), f"wrote {out} ({len(d)} terms, max error {err:.3g})"], args.json)
    return EXIT_SEPARABLE if valid else EXIT_INVALID


def cmd_verify(args) -> int:
    try:
        a, shape = load_density(args.matrix, args.format)
        d = formats.read_decomposition(Path(args.decomposition).read_text())
    except (OSError, LapsepError, ValueError) as exc:
        return _fail(str(exc), args.json, "verify")
    if (d.shape.p, d.shape.q) != (shape.p, shape.q):
        return _fail(f"shape mismatch: matrix ({shape.p}, {shape.q}) vs decomposition ({d.shape.p}, {d.shape.q})",
                     args.json, "verify")
    try:
        valid, err, wsum = verify_decomposition(a, d, args.tol)
    except LapsepError as exc:
        return _fail(str(exc), args.json, "verify")
    report = {"command": "verify", "valid": valid, "max_error": err, "weight_sum": wsum,
              "terms": len(d), "tol": args.tol}
    _emit(report, [f"{'valid' if valid else 'INVALID'}: max error {err:.3g}, weight sum {wsum!r}, {len(d)} terms"],
          args.json)
    return EXIT_SEPARABLE if valid else EXIT_ENTANGLED


def cmd_ptranspose(args) -> int:
    try:
        a, shape = load_density(args.input, args.format)
    except (OSError, LapsepError, ValueError) as exc:
        return _fail(str(exc), args.json, "ptranspose")
    out = Path(args.output)
    out.write_text(formats.write_matrix(partial_transpose(a, shape), shape))
    _emit({"command": "ptranspose", "artifacts": [str(out)]}, [f"wrote {out}"], args.json)
    return 0


def cmd_witness(args) -> int:
    try:
        a, shape = load_density(args.input, args.format)
        w = entanglement_witness(a, shape, args.tol)
        lam, _ = min_pt_eigenpair(a, shape, args.tol)
    except (OSError, LapsepError, ValueError) as exc:
        return _fail(str(exc), args.json, "witness")
    if w is None:
        _emit({"command": "witness", "witness": None, "min_eigenvalue": lam}, ["none"], args.json)
        return 0
    vec = " ".join(f"{_num(z.real)}{'+' if z.imag >= 0 else '-'}{_num(abs(z.imag))}j" for z in w.vector)
    report = {"command": "witness", "witness": {"eigenvalue": w.eigenvalue,
                                                "vector": [[z.real, z.imag] for z in w.vector]}}
    _emit(report, [f"witness eigenvalue {_num(w.eigenvalue)}", f"vector {vec}"], args.json)
    return EXIT_ENTANGLED


def cmd_gen(args) -> int:
    try:
        a = generate(args.cls, args.p, args.q, args.seed, args.kind)
    except (LapsepError, ValueError) as exc:
        return _fail(str(exc), args.json, "gen")
    from .tensor import TensorShape

    shape = TensorShape(args.p, args.q)
    out = Path(args.output)
    artifacts = [str(out)]
    if args.kind == "separable":
        d = separable_decomposition(a, shape, "V" if args.cls == "v1" else "S", args.tol)
        if not verify_decomposition(a, d, args.tol)[0]:
            return _fail("generated instance failed its own decomposition check", args.json, "gen")
        side = Path(str(out) + ".decomp")
        side.write_text(formats.write_decomposition(d))
        artifacts.append(str(side))
    elif args.kind == "entangled":
        if entanglement_witness(a, shape, args.tol) is None:
            return _fail("generated instance has no partial-transpose witness", args.json, "gen")
    else:
        r = classify_membership(a, args.tol)
        member = {"s10": r.in_S1_0, "s1": r.in_S1, "v1": r.in_V1}[args.cls]
        if not member:
            return _fail("generated instance is outside the requested class", args.json, "gen")
    out.write_text(formats.write_matrix(a, shape))
    _emit({"command": "gen", "class": args.cls, "kind": args.kind, "seed": args.seed, "artifacts": artifacts},
          [f"wrote {p}" for p in artifacts], args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance (default 1e-9)")
    common.add_argument("--json", action="store_true", help="print a structured JSON report")
    common.add_argument("--format", choices=["matrix", "graph"], default=None,
                        help="input kind (default: inferred from the header)")

    parser = argparse.ArgumentParser(prog="lapsep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="decide separable / entangled")
    p.add_argument("inputs", nargs="+", help="matrix or graph files")
    p.add_argument("--jobs", type=int, default=1, help="classify several files concurrently")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", parents=[common], help="write a product-state decomposition")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", parents=[common], help="check a decomposition against a matrix")
    p.add_argument("matrix")
    p.add_argument("decomposition")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ptranspose", parents=[common], help="write the partial transpose")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_ptranspose)

    p = sub.add_parser("witness", parents=[common], help="print a negative eigenpair of the partial transpose")
    p.add_argument("input")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("gen", parents=[common], help="generate a random instance")
    p.add_argument("cls", choices=CLASSES, metavar="class", help="|".join(CLASSES))
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=KINDS, default="random")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else 0
    if getattr(args, "p", 1) < 1 or getattr(args, "q", 1) < 1:
        return _fail("p and q must be positive", args.json, args.command)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
