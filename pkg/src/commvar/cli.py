"""Command-line front end.

One executable, flat subcommands, JSON in and out.  Exit codes: 0 success,
1 malformed input, 2 domain errors (the payload is {"error": <code>, ...}).
Identical invocations with the same seed produce byte-identical output; the
default seed is 0 unless COMMVAR_SEED is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import central, finmodel, homotopy, pi1, selftest, serialization, variety, weyl
from .errors import CommvarError, MalformedInput
from .fingerprint import Fingerprint
from .matgroup import SPIN7, descriptor_from_name


def _default_seed() -> int:
    try:
        return int(os.environ.get("COMMVAR_SEED", "0"))
    except ValueError:
        return 0


def _emit(payload, out=None) -> None:
    text = serialization.dump_json(payload, out)
    if out is None:
        print(text)
    else:
        print(serialization.dump_json({"written": str(out)}))


def _parse_fingerprint(text: str, p: int, k: int) -> Fingerprint:
    n = k * (k - 1) // 2
    try:
        entries = [int(x) for x in text.replace(";", ",").split(",") if x.strip() != ""]
    except ValueError as exc:
        raise MalformedInput(f"fingerprint entries must be integers: {text!r}") from exc
    if len(entries) != n:
        raise MalformedInput(
            f"need {n} entries for k={k} (pairs (0,1), (0,2), ..., ({k-2},{k-1}))"
        )
    return Fingerprint(p, k, tuple(entries))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="commvar",
        description="Commuting k-tuples in compact matrix Lie groups.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a tuple from a named component")
    p.add_argument("--group", required=True, help="SU(n), T^r, or G_{m,p}")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--component", choices=["identity", "exotic"], default="identity")
    p.add_argument("--fingerprint", default=None, help="CSV of upper-triangular entries")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("validate", help="commutation report for a tuple file")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("classify", help="component classification of a tuple file")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("invert", help="Weyl-normal-form preimage of a regular tuple")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("regular", help="Weyl stabilizer of a preimage file")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--json", action="store_true", help="machine output")

    p = sub.add_parser("contract", help="contract a closed loop file")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--stages", type=Path, default=None, help="directory for stage files")

    p = sub.add_parser("to-identity", help="path from a tuple to the trivial representation")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("census", help="fingerprint histogram over E_p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("components", help="closed-form component count N(k, m, p)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("pi1", help="fundamental group of the commuting variety")
    p.add_argument("--group", required=True, help="SU(n), T^r, G_{m,p}, or Spin(7)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--component", choices=["identity", "exotic"], default="identity")

    p = sub.add_parser("selftest", help="run the acceptance battery")
    p.add_argument("--json", action="store_true", help="machine output")
    return ap


def _cmd_sample(args) -> int:
    desc = descriptor_from_name(args.group)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.component == "identity":
        t = variety.sample_identity_component(desc, args.k, seed)
    else:
        shape = variety.is_central_product(desc)
        if shape is None:
            from .errors import UnsupportedDescriptor

            raise UnsupportedDescriptor("exotic sampling needs a G_{m,p} group")
        _, prime = shape
        if args.fingerprint is None:
            fp = Fingerprint.from_pairs(prime, args.k, {(0, 1): 1})
        else:
            fp = _parse_fingerprint(args.fingerprint, prime, args.k)
        t = variety.sample_exotic(desc, args.k, fp, seed)
    _emit(serialization.tuple_to_json(t), args.out)
    return 0


def _cmd_validate(args) -> int:
    t = serialization.tuple_from_json(serialization.load_json(args.infile))
    report = variety.validate_tuple(t, args.tol)
    _emit(
        {
            "residual": report.residual,
            "worst_pair": list(report.worst_pair) if report.worst_pair else None,
            "tol": report.tol,
            "passed": report.passed,
        }
    )
    return 0


def _cmd_classify(args) -> int:
    t = serialization.tuple_from_json(serialization.load_json(args.infile))
    cls = central.classify_component(t, args.tol)
    if cls.is_identity:
        _emit({"component": "identity"})
    else:
        _emit(
            {
                "component": "exotic",
                "fingerprint": [[i, j, mu] for i, j, mu in cls.fingerprint.nonzero_pairs()],
                "p": cls.fingerprint.p,
                "k": cls.fingerprint.k,
            }
        )
    return 0


def _cmd_invert(args) -> int:
    t = serialization.tuple_from_json(serialization.load_json(args.infile))
    pre = weyl.sigma_inverse_regular(t, tol=args.tol)
    _emit(serialization.preimage_to_json(pre), args.out)
    return 0


def _cmd_regular(args) -> int:
    pre = serialization.preimage_from_json(serialization.load_json(args.infile))
    report = weyl.is_regular(pre.torus)
    if args.json:
        _emit(
            {
                "regular": report.regular,
                "stabilizer_order": len(report.stabilizer),
                "stabilizer": [
                    [list(perm) for perm in word] for word in report.stabilizer
                ],
            }
        )
        return 0
    print("regular" if report.regular else f"not regular ({len(report.stabilizer)} Weyl elements)")
    for word in report.stabilizer:
        cycles = " | ".join(weyl.permutation_cycles(perm) for perm in word) or "()"
        print(f"  {cycles}")
    return 0


def _cmd_contract(args) -> int:
    loop = serialization.path_from_json(serialization.load_json(args.infile))
    stages = homotopy.contract_loop(loop)
    if args.stages is not None:
        args.stages.mkdir(parents=True, exist_ok=True)
        for i, stage in enumerate(stages):
            serialization.dump_json(
                serialization.path_to_json(stage), args.stages / f"stage_{i:04d}.json"
            )
    _emit(
        {
            "stages": len(stages),
            "final_diameter": homotopy.loop_diameter(stages[-1]),
            "written": str(args.stages) if args.stages is not None else None,
        }
    )
    return 0


def _cmd_to_identity(args) -> int:
    t = serialization.tuple_from_json(serialization.load_json(args.infile))
    waypoints = homotopy.path_to_identity(t, tol=args.tol, steps=args.steps)
    payload = {
        "descriptor": serialization.descriptor_to_json(t.descriptor),
        "waypoints": [serialization.tuple_to_json(w)["elements"] for w in waypoints],
        "max_residual": max(w.residual for w in waypoints),
    }
    _emit(payload, args.out)
    return 0


def _cmd_census(args) -> int:
    group = finmodel.extraspecial(args.p)
    hist = finmodel.census_fingerprints(group, group.center(), args.k, threads=args.threads)
    histogram = {
        ",".join(str(e) for e in fp.entries): count
        for fp, count in sorted(hist.items(), key=lambda kv: kv[0].entries)
    }
    zero = Fingerprint.zero(args.p, args.k)
    _emit(
        {
            "group": group.name,
            "p": args.p,
            "k": args.k,
            "histogram": histogram,
            "commuting": hist.get(zero, 0),
            "nonzero_fingerprints": sum(1 for fp in hist if not fp.is_zero),
        }
    )
    return 0


def _cmd_components(args) -> int:
    _emit({"N": finmodel.count_components_formula(args.k, args.m, args.p)})
    return 0


def _cmd_pi1(args) -> int:
    name = args.group.strip()
    group = SPIN7 if name.replace(" ", "") == SPIN7 else descriptor_from_name(name)
    if args.component == "identity":
        component = central.ComponentClass.identity()
    else:
        # the exotic answer does not depend on the fingerprint, any nonzero one will do
        if isinstance(group, str):
            component = central.ComponentClass.exotic(Fingerprint.from_pairs(2, 2, {(0, 1): 1}))
        else:
            shape = variety.is_central_product(group)
            if shape is None:
                from .errors import UnsupportedExotic

                raise UnsupportedExotic(f"no exotic components known for {args.group}")
            component = central.ComponentClass.exotic(
                Fingerprint.from_pairs(shape[1], max(args.k, 2), {(0, 1): 1})
            )
    answer = pi1.pi1_of_hom(group, args.k, component)
    if isinstance(answer, pi1.FgAbelianGroup):
        _emit(
            {
                "group": answer.label(),
                "order": answer.order(),
                "free_rank": answer.free_rank,
                "torsion": list(answer.torsion),
            }
        )
    else:
        _emit({"group": answer.name, "order": answer.order, "presentation": answer.presentation})
    return 0


def _cmd_selftest(args) -> int:
    results = selftest.run_all(echo=None if args.json else print)
    if args.json:
        _emit(
            {
                "criteria": [
                    {
                        "name": r.name,
                        "passed": r.passed,
                        "seconds": round(r.seconds, 3),
                        "details": {k: repr(v) for k, v in r.details.items()},
                    }
                    for r in results
                ],
                "passed": all(r.passed for r in results),
            }
        )
    return 0 if all(r.passed for r in results) else 2


_COMMANDS = {
    "sample": _cmd_sample,
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "invert": _cmd_invert,
    "regular": _cmd_regular,
    "contract": _cmd_contract,
    "to-identity": _cmd_to_identity,
    "census": _cmd_census,
    "components": _cmd_components,
    "pi1": _cmd_pi1,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MalformedInput as exc:
        print(json.dumps({"error": "MalformedInput", "detail": str(exc)}))
        return 1
    except CommvarError as exc:
        print(json.dumps({"error": exc.code, "detail": str(exc)}))
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
