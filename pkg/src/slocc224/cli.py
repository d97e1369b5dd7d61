"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 ambiguous classification,
3 property-suite failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, io
from .classifier import SIGNATURES, SloccClass, classify
from .errors import AmbiguousClassification, ClassifierDisagreement, InvalidInput, SloccError
from .invariants import invariant_signature
from .linalg import rank_tolerance
from .mixed import mixed_class_of_decomposition
from .orbits import (
    apply_local,
    conversion_witness,
    dominates,
    necessary_condition,
    order_dot,
    random_orbit_sample,
    representative,
)
from .preparation import build_povm, verify_povm
from .states import fidelity

EXIT_INPUT = 1
EXIT_AMBIGUOUS = 2
EXIT_SUITE = 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _class_arg(text: str) -> SloccClass:
    try:
        return SloccClass.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def summary_line(report) -> str:
    sig = report.signature
    lr = sig.local_ranks
    key = SIGNATURES[report.label]
    return (f"{report.label.value} ({lr.r1},{lr.r2},{lr.r3}) — signature "
            f"({key[0]},{key[1]},{key[2]})/r(R)={sig.rank_R}/r(RᵀR)={sig.rank_RTR}")


def cmd_classify(args) -> int:
    report = classify(io.read_state(args.state))
    if args.json:
        sys.stdout.write(io.dumps(io.with_provenance(report.as_dict())))
    else:
        print(summary_line(report))
        margins = ", ".join(f"{k}={v:.2f}" for k, v in report.margins.items())
        print(f"  decision margins (decades): {margins}")
    return 0


def cmd_invariants(args) -> int:
    state = io.read_state(args.state)
    sys.stdout.write(io.dumps(io.with_provenance(invariant_signature(state).as_dict())))
    return 0


def cmd_representative(args) -> int:
    obj = io.state_to_obj(representative(args.cls))
    obj["class"] = args.cls.value
    _emit(io.dumps(io.with_provenance(obj)), args.output)
    return 0


def cmd_sample(args) -> int:
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    width = max(3, len(str(args.count - 1)))
    for k in range(args.count):
        obj = io.state_to_obj(random_orbit_sample(args.cls, rng))
        obj.update({"class": args.cls.value, "index": k})
        io.write_json(outdir / f"{args.cls.value}_{k:0{width}d}.json", io.with_provenance(obj, seed=args.seed))
    print(f"wrote {args.count} {args.cls.value} samples to {outdir}")
    return 0


def cmd_convert(args) -> int:
    state = io.read_state(args.state)
    source = classify(state).label
    target = args.to
    edge = conversion_witness(source, target)
    if edge is None:
        if necessary_condition(source, target):
            print(f"no proven conversion; dominates({source.value}, {target.value}) = false "
                  f"(the rank invariants do not forbid it)")
        else:
            print(f"no upward conversion; dominates({source.value}, {target.value}) = false")
        return 0
    image = apply_local(state, edge.witness)
    applied_to = "input"
    if image.norm() <= 1e-12 * state.norm() or classify(image).label != target:
        # witnesses are stated on representatives; other orbit members need the frame change first
        image = apply_local(representative(source), edge.witness)
        applied_to = "representative"
    image = image.normalized()
    obj = io.state_to_obj(image)
    obj.update({
        "source_class": source.value,
        "class": target.value,
        "witness": edge.kind,
        "applied_to": applied_to,
        "fidelity_to_representative": fidelity(image, representative(target)),
    })
    _emit(io.dumps(io.with_provenance(obj)), args.output)
    if args.output:
        print(f"{source.value} -> {target.value} via {edge.kind} (applied to {applied_to})")
    return 0


def cmd_prepare(args) -> int:
    target = io.read_state(args.target).normalized()
    ens = build_povm(target)
    report = verify_povm(ens, target)
    _emit(io.dumps(io.with_provenance(io.povm_to_obj(ens, report))), args.output)
    if args.output:
        print(f"16 branches; completeness residual {report.completeness_residual:.3e}, "
              f"min fidelity {report.min_branch_fidelity:.12f}, probability sum {report.probability_sum:.12f}")
    return 0


def cmd_mixed_class(args) -> int:
    ens = io.ensemble_from_obj(io.load_json(args.ensemble))
    components = [classify(s).label.value for s in ens.states]
    level = mixed_class_of_decomposition(ens)
    obj = {
        "class": level.label,
        "level": int(level),
        "components": [{"weight": w, "class": c} for w, c in zip(ens.weights, components)],
        "note": "class of this decomposition; an upper bound on the class of the density matrix",
    }
    sys.stdout.write(io.dumps(io.with_provenance(obj)))
    return 0


def cmd_order(args) -> int:
    if args.dot:
        sys.stdout.write(order_dot())
    else:
        for a in SloccClass:
            below = [b.value for b in SloccClass if b != a and dominates(a, b)]
            print(f"{a.value}: {', '.join(below) or '-'}")
    return 0


def cmd_verify_suite(args) -> int:
    from .suite import run_suite

    results = run_suite(args.trials, args.seed)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_SUITE if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slocc224", description="SLOCC classes of 2x2xn pure states")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--tolerance", type=float, default=None, metavar="EPS",
                   help="relative singular-value threshold for numerical ranks (default 1e-9)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="class label, signature and decision margins")
    c.add_argument("state")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("invariants", help="full invariant signature as JSON")
    c.add_argument("state")
    c.set_defaults(func=cmd_invariants)

    c = sub.add_parser("representative", help="canonical state of a class")
    c.add_argument("cls", type=_class_arg, metavar="class")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_representative)

    c = sub.add_parser("sample", help="random orbit samples of a class")
    c.add_argument("--class", dest="cls", type=_class_arg, required=True)
    c.add_argument("--count", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("-o", "--output", required=True, help="output directory")
    c.set_defaults(func=cmd_sample)

    c = sub.add_parser("convert", help="apply a proven conversion witness")
    c.add_argument("state")
    c.add_argument("--to", type=_class_arg, required=True)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_convert)

    c = sub.add_parser("prepare", help="POVM preparing the target from two Bell pairs")
    c.add_argument("target")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_prepare)

    c = sub.add_parser("mixed-class", help="class of an explicit ensemble decomposition")
    c.add_argument("ensemble")
    c.set_defaults(func=cmd_mixed_class)

    c = sub.add_parser("order", help="the proven partial order")
    c.add_argument("--dot", action="store_true", help="Graphviz DOT output")
    c.set_defaults(func=cmd_order)

    c = sub.add_parser("verify-suite", help="run every property check")
    c.add_argument("--trials", type=int, default=None, help="trials per check (default: full size)")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_verify_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which would collide with "ambiguous"
        return EXIT_INPUT if exc.code else 0
    if getattr(args, "count", 1) < 1 or (getattr(args, "trials", None) or 1) < 1:
        print("error: counts must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.tolerance is not None:
            if not (0 < args.tolerance < 1):
                raise InvalidInput(f"--tolerance must lie in (0, 1), got {args.tolerance}")
            with rank_tolerance(args.tolerance):
                return args.func(args)
        return args.func(args)
    except (AmbiguousClassification, ClassifierDisagreement) as exc:
        print(f"ambiguous: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (SloccError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
