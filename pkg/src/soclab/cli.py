"""Command line front end.

Subcommands::

    soclab eval FILE.diag                 evaluate a diagram, print the process
    soclab classify FILE.json [--split IN OUT]
                                          causality (and no-signalling) checks
    soclab soc FILE.json --slots IN OUT   one-hole preservation of causality
    soclab soc2 FILE.json [--slots A1 A2 B1 B2]
                                          two-hole preservation of causality
    soclab verify {theorem1,corollary1} FILE.json [--trials N --seed S --dims M]
                                          randomized closure checks, JSONL out
    soclab decompose FILE.json --span-size N [--seed S --tol T]
                                          fit as an affine mix of product pairs

Exit codes: 0 when the checked property holds, 1 when it fails, 2 for
syntax, typing, or argument problems, 3 for unreadable or malformed files
and singular numerics.  Results go to stdout, diagnostics to stderr.  The
comparison tolerance is ``--eps`` when given, else the ``SOCLAB_EPS``
environment variable, else 1e-9.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import prod

from .affine import decompose_nonsignalling, random_product_span
from .dsl import evaluate
from .errors import (
    DiagramSyntaxError,
    DiagramTypeError,
    DimensionError,
    ReconstructionError,
    WireMismatchError,
)
from .harness import HarnessConfig, report_to_jsonl, verify_corollary1, verify_theorem1
from .predicates import is_causal, is_nonsignalling, is_soc, is_soc2
from .process import process_from_dict, process_to_dict
from .supermap import supermap_from_dict, supermap_from_process
from .tensor import DEFAULT_EPS


def _resolve_eps(args) -> float:
    if getattr(args, "eps", None) is not None:
        return args.eps
    env = os.environ.get("SOCLAB_EPS")
    if env is not None and env != "":
        return float(env)
    return DEFAULT_EPS


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _cmd_eval(args) -> int:
    with open(args.file) as fh:
        text = fh.read()
    proc = evaluate(text, base_dir=os.path.dirname(os.path.abspath(args.file)))
    if proc is None:
        print("error: diagram holds only declarations, nothing to evaluate", file=sys.stderr)
        return 2
    _emit(process_to_dict(proc))
    return 0


def _cmd_classify(args) -> int:
    p = process_from_dict(_load_json(args.file))
    eps = _resolve_eps(args)
    causal = is_causal(p, eps=eps)
    payload = {"causal": {"holds": causal.holds, "residual": causal.residual}}
    ok = causal.holds
    if args.split is not None:
        ns = is_nonsignalling(p, in_split=args.split[0], out_split=args.split[1], eps=eps)
        payload["nonsignalling"] = {"holds": ns.holds, "residual": ns.residual}
        ok = ok and ns.holds
    _emit(payload)
    return 0 if ok else 1


def _cmd_soc(args) -> int:
    p = process_from_dict(_load_json(args.file))
    verdict = is_soc(p, in_split=args.slots[0], out_split=args.slots[1], eps=_resolve_eps(args))
    _emit({"soc": {"holds": verdict.holds, "residual": verdict.residual}})
    return 0 if verdict.holds else 1


def _cmd_soc2(args) -> int:
    data = _load_json(args.file)
    if args.slots is not None:
        a1, a2, b1, b2 = args.slots
        w = supermap_from_process(process_from_dict(data), (a1, a2), (b1, b2))
    else:
        w = supermap_from_dict(data)
    verdict = is_soc2(w, eps=_resolve_eps(args))
    _emit({"soc2": {"holds": verdict.holds, "residual": verdict.residual}})
    return 0 if verdict.holds else 1


def _cmd_verify(args) -> int:
    w = supermap_from_dict(_load_json(args.file))
    config = HarnessConfig(
        trials=args.trials, seed=args.seed, ancilla_dim=args.dims, eps=_resolve_eps(args)
    )
    run = verify_theorem1 if args.claim == "theorem1" else verify_corollary1
    report = run(w, config)
    for line in report_to_jsonl(report):
        print(line)
    return 0 if report.premise_holds and report.all_causal else 1


def _cmd_decompose(args) -> int:
    f = process_from_dict(_load_json(args.file))
    ins, outs = args.split
    if not (0 < ins < len(f.in_sys)) or not (0 < outs < len(f.out_sys)):
        raise DimensionError("both sides need at least one factor; check --split")
    ai, bi = prod(f.in_sys.dims[:ins]), prod(f.in_sys.dims[ins:])
    ao, bo = prod(f.out_sys.dims[:outs]), prod(f.out_sys.dims[outs:])
    span = random_product_span(args.span_size, (ai, bi), (ao, bo), seed=args.seed)
    res = decompose_nonsignalling(f, span, in_split=ins, out_split=outs)
    _emit(
        {
            "coeffs": list(res.coeffs),
            "residual": res.residual,
            "span_deficient": res.span_deficient,
        }
    )
    return 0 if res.residual <= args.tol else 1


def _add_eps(sub) -> None:
    sub.add_argument("--eps", type=float, default=None, help="comparison tolerance")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="soclab", description="causality checks for processes and supermaps")
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a diagram file and print the resulting process")
    pe.add_argument("file")
    pe.set_defaults(func=_cmd_eval)

    pc = sub.add_parser("classify", help="check causality, and no-signalling when --split is given")
    pc.add_argument("file")
    pc.add_argument("--split", nargs=2, type=int, metavar=("IN", "OUT"), default=None,
                    help="factor counts of the first party's input and output")
    _add_eps(pc)
    pc.set_defaults(func=_cmd_classify)

    ps = sub.add_parser("soc", help="check that a one-slot comb sends causal channels to causal channels")
    ps.add_argument("file")
    ps.add_argument("--slots", nargs=2, type=int, required=True, metavar=("IN", "OUT"),
                    help="factor counts of the slot input and slot output")
    _add_eps(ps)
    ps.set_defaults(func=_cmd_soc)

    p2 = sub.add_parser("soc2", help="check that a two-slot supermap sends causal pairs to causal channels")
    p2.add_argument("file")
    p2.add_argument("--slots", nargs=4, type=int, metavar=("A1", "A2", "B1", "B2"), default=None,
                    help="slot dimensions when the file holds a plain process")
    _add_eps(p2)
    p2.set_defaults(func=_cmd_soc2)

    pv = sub.add_parser("verify", help="randomized checks with ancillas or shared states")
    pv.add_argument("claim", choices=["theorem1", "corollary1"])
    pv.add_argument("file")
    pv.add_argument("--trials", type=int, default=20)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--dims", type=int, default=2, help="ancilla or memory dimension")
    _add_eps(pv)
    pv.set_defaults(func=_cmd_verify)

    pd = sub.add_parser("decompose", help="fit a channel as an affine mix of random product pairs")
    pd.add_argument("file")
    pd.add_argument("--span-size", type=int, required=True)
    pd.add_argument("--seed", type=int, default=0)
    pd.add_argument("--split", nargs=2, type=int, metavar=("IN", "OUT"), default=(1, 1))
    pd.add_argument("--tol", type=float, default=1e-6)
    pd.set_defaults(func=_cmd_decompose)

    return ap


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (DiagramSyntaxError, DiagramTypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DimensionError, WireMismatchError, ReconstructionError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def app() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
