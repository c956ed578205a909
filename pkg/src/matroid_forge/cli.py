"""Command-line entry point: ``matroid-forge <subcommand> [options]``.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 capacity exceeded.  Output is JSON (sorted keys) or plain text, and is
byte-identical across runs with the same inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bits import members, popcount
from .config import ENV_VAR, Thresholds, load_thresholds
from .core import ExplicitMatroid, check_axioms
from .edmonds import brute_force_max_common, certify, max_common_independent
from .errors import ArgumentError, CapacityError, InstanceError, MatroidError
from .instances import FAMILIES, GeneratorSpec, build_matroid, build_partition, generate, load_document, serialize_instance
from .intersection import Witness, main_witness, verify_witness
from .zoo import classify_uniform

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_CAPACITY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", metavar="FILE", help="instance document (JSON)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", action="store_true", help="include per-phase trace")
    p.add_argument("--threshold-brute", type=int, metavar="N")
    p.add_argument("--threshold-theta", type=int, metavar="N")
    p.add_argument("--format", choices=("json", "text"), default="json")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="matroid-forge", description="Intersection-property witnesses for a matroid against a partition matroid.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("intersect", parents=[common], help="witness plus augmenting-path cross-check")
    p = sub.add_parser("edmonds", parents=[common], help="maximum common independent set with certificate")
    p.add_argument("--brute", action="store_true", help="also run brute force (up to --threshold-brute elements)")
    p = sub.add_parser("verify", parents=[common], help="verify a witness")
    p.add_argument("--witness", metavar="FILE", help="witness document; defaults to the instance's 'witness' key")
    sub.add_parser("check-axioms", parents=[common], help="check the independence axioms for M and N")
    sub.add_parser("classify-uniform", parents=[common], help="free / uniform / not uniform")

    p = sub.add_parser("gen", parents=[common], help="generate a random instance")
    p.add_argument("--family", choices=FAMILIES, default="graphic")
    p.add_argument("--elements", type=int, default=8)
    p.add_argument("--parts", type=int, default=3)
    p.add_argument("--vertices", type=int, default=5)
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--rank", type=int)
    p.add_argument("--max-cap", type=int)
    p.add_argument("--output", metavar="FILE", help="write the instance here instead of stdout")

    p = sub.add_parser("selftest", parents=[common], help="run the property suites")
    size = p.add_mutually_exclusive_group()
    size.add_argument("--quick", action="store_true", help="reduced sizes (default)")
    size.add_argument("--full", action="store_true", help="acceptance sizes; takes minutes")
    p.add_argument("--timing", action="store_true", help="include run times (output is then not reproducible)")
    return parser


# -- helpers ------------------------------------------------------------------


def _thresholds(args) -> Thresholds:
    try:
        base = load_thresholds()
    except ValueError as exc:
        raise ArgumentError(f"{ENV_VAR}: {exc}") from None
    return base.with_overrides(brute=args.threshold_brute, theta=args.threshold_theta)


def _document(args) -> dict:
    if not args.input:
        raise InstanceError("$", "--input FILE is required")
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceError("$", f"cannot read {args.input}: {exc.strerror}") from None
    return load_document(text)


def _instance(args):
    doc = _document(args)
    return doc, build_matroid(doc), build_partition(doc)


def _text(doc, indent: str = "") -> list[str]:
    lines = []
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for k, item in enumerate(value):
                lines.append(f"{indent}  - [{k}]")
                lines.extend(_text(item, indent + "    "))
        elif isinstance(value, list):
            lines.append(f"{indent}{key}: {' '.join(map(str, value)) if value else '-'}")
        else:
            lines.append(f"{indent}{key}: {value if isinstance(value, str) else json.dumps(value)}")
    return lines


def _emit(doc: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(_text(doc)) + "\n")


# -- subcommands ------------------------------------------------------------------


def cmd_intersect(args) -> tuple[dict, int]:
    _, m, n = _instance(args)
    trace: list | None = [] if args.trace else None
    w = main_witness(m, n, thresholds=_thresholds(args), seed=args.seed, trace=trace)
    report = verify_witness(m, n, w)
    opt = max_common_independent(m, n)
    a = m._span(w.I_M)
    out = {
        "witness": w.to_dict(),
        "certificate": {
            "A": members(a),
            "rank_M_A": m._rank(a),
            "rank_N_complement": n._rank(m.ground_mask & ~a),
        },
        "size": w.size,
        "edmonds_size": opt.size,
        "agreement": w.size == opt.size,
        "verified": report.ok,
    }
    if trace is not None:
        out["trace"] = trace
    return out, EXIT_OK if out["agreement"] and report.ok else EXIT_VERIFY


def cmd_edmonds(args) -> tuple[dict, int]:
    _, m, n = _instance(args)
    opt = max_common_independent(m, n)
    out = opt.to_dict()
    out["certified"] = certify(m, n, opt.I_star, opt.A)
    code = EXIT_OK if out["certified"] else EXIT_VERIFY
    if args.brute:
        best = brute_force_max_common(m, n, threshold=_thresholds(args).brute)
        out["brute_force"] = {"I": members(best), "size": popcount(best)}
        if popcount(best) != opt.size:
            code = EXIT_VERIFY
    if args.trace:
        out["trace"] = [{"phase": k, "I": members(s)} for k, s in enumerate(opt.history)]
    return out, code


def cmd_verify(args) -> tuple[dict, int]:
    doc, m, n = _instance(args)
    if args.witness:
        try:
            wdoc = json.loads(Path(args.witness).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InstanceError("$", f"cannot read {args.witness}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise InstanceError("$", f"witness file is not valid JSON: {exc}") from None
        if isinstance(wdoc, dict) and "witness" in wdoc:
            wdoc = wdoc["witness"]
        source = "file"
    elif "witness" in doc:
        wdoc = doc["witness"]
        source = "instance"
    else:
        wdoc = main_witness(m, n, thresholds=_thresholds(args), seed=args.seed).to_dict()
        source = "computed"
    if not isinstance(wdoc, dict) or any(
        not isinstance(wdoc.get(k), list) or not all(isinstance(e, int) and e >= 0 for e in wdoc[k]) for k in ("I", "I_M", "I_N")
    ):
        raise InstanceError("$.witness", "needs lists I, I_M, I_N of non-negative integers")
    w = Witness.from_dict(wdoc)
    report = verify_witness(m, n, w)
    out = {"source": source, "witness": w.to_dict(), **report.to_dict()}
    return out, EXIT_OK if report.ok else EXIT_VERIFY


def cmd_check_axioms(args) -> tuple[dict, int]:
    doc = _document(args)
    limit = _thresholds(args).axioms
    ground = 0
    for e in doc["elements"]:
        ground |= 1 << e
    if popcount(ground) > limit:
        raise CapacityError(f"axiom check limited to {limit} elements, got {popcount(ground)}")
    if doc["M"]["type"] == "explicit":
        family = []
        for s in doc["M"]["independent_sets"]:
            mask = 0
            for e in s:
                mask |= 1 << e
            family.append(mask)
    else:
        family = list(build_matroid(doc).independent_sets())
    n = build_partition(doc)
    out = {
        "M": check_axioms(family, ground, threshold=limit).to_dict(),
        "N": check_axioms(ExplicitMatroid.from_matroid(n).family, ground, threshold=limit).to_dict(),
    }
    return out, EXIT_OK if out["M"]["ok"] and out["N"]["ok"] else EXIT_VERIFY


def cmd_classify_uniform(args) -> tuple[dict, int]:
    _, m, n = _instance(args)
    limit = _thresholds(args).classify
    return {"M": classify_uniform(m, limit).to_dict(), "N": classify_uniform(n, limit).to_dict()}, EXIT_OK


def cmd_gen(args) -> tuple[dict | None, int]:
    spec = GeneratorSpec(
        seed=args.seed,
        family=args.family,
        elements=args.elements,
        parts=args.parts,
        vertices=args.vertices,
        edge_prob=args.edge_prob,
        dim=args.dim,
        rank=args.rank,
        max_cap=args.max_cap,
    )
    text = serialize_instance(generate(spec)) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        return {"output": args.output, "spec": spec.to_dict()}, EXIT_OK
    sys.stdout.write(text)
    return None, EXIT_OK


def cmd_selftest(args) -> tuple[dict, int]:
    from . import suites

    criteria = suites.full_criteria() if args.full else suites.quick_criteria()
    results = [run() for run in criteria]
    out = {
        "mode": "full" if args.full else "quick",
        "criteria": [r.to_dict(timing=args.timing) for r in results],
        "passed": all(r.passed for r in results),
    }
    return out, EXIT_OK if out["passed"] else EXIT_VERIFY


COMMANDS = {
    "intersect": cmd_intersect,
    "edmonds": cmd_edmonds,
    "verify": cmd_verify,
    "check-axioms": cmd_check_axioms,
    "classify-uniform": cmd_classify_uniform,
    "gen": cmd_gen,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _thresholds(args)
        doc, code = COMMANDS[args.command](args)
    except MatroidError as exc:
        sys.stderr.write(f"matroid-forge: {exc}\n")
        return exc.exit_code
    if doc is not None:
        _emit(doc, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
