"""Command-line front end.  Exit status: 0 ok, 1 bad input, 2 internal inconsistency."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .arithmetize import arithmetize_circuit, unbounded_arithmetize
from .circuit import BoolCircuit, CircuitError, parse_netlist, to_netlist
from .gf import FieldError, parse_field
from .pit import InconsistencyError, PitError, exhaustive_test, sample_test, symbolic_canonical, symbolic_test
from .reduction import build_A_star
from .sat3 import (
    DecodeError,
    EncodingError,
    decode,
    encode,
    make_profile,
    parse_dimacs,
    read_encodings,
    to_dimacs,
)

INPUT_ERRORS = (FieldError, CircuitError, EncodingError, DecodeError, PitError, ValueError, OSError)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _profile(args):
    return make_profile(args.profile, args.n)


def _load_decider(source: str, n: int, profile) -> tuple[BoolCircuit, dict]:
    if source == "synth":
        return harness.synth_decider(n, profile), {"kind": "synthesized"}
    c = parse_netlist(_read(source))
    if not isinstance(c, BoolCircuit):
        raise InputError(f"{source}: decider must be a boolean netlist")
    return c, {"kind": "file", "path": source}


def cmd_encode(args) -> int:
    pr = _profile(args)
    f = parse_dimacs(_read(args.instance))
    _write(args.out, str(encode(args.n, f, pr)) + "\n")
    return 0


def cmd_decode(args) -> int:
    pr = _profile(args)
    out = []
    for lineno, s in enumerate(read_encodings(_read(args.encodings), pr), 1):
        try:
            out.append(to_dimacs(decode(s)))
        except DecodeError as exc:
            raise InputError(f"encoding {lineno}: malformed {exc}") from None
    _write(args.out, "\n".join(out))
    return 0


def cmd_arithmetize(args) -> int:
    c = parse_netlist(_read(args.circuit))
    if not isinstance(c, BoolCircuit):
        raise InputError("arithmetize expects a boolean netlist")
    F = parse_field(args.field)
    a, report = (arithmetize_circuit if c.fanin == "bounded" else unbounded_arithmetize)(c, F)
    _write(args.out, to_netlist(a))
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def cmd_build_reduction(args) -> int:
    pr = _profile(args)
    F = parse_field(args.field)
    dec, _ = _load_decider(args.decider, args.n, pr)
    bundle = build_A_star(dec, args.n, pr, F)
    bundle.export(args.out)
    print(json.dumps(bundle.manifest(), indent=2, sort_keys=True))
    return 0


def cmd_pit(args) -> int:
    c = parse_netlist(_read(args.circuit))
    if isinstance(c, BoolCircuit):
        raise InputError("pit expects an arithmetic netlist")
    if args.tester == "exhaustive":
        v = exhaustive_test(c)
    elif args.tester == "symbolic":
        poly = symbolic_canonical(c)
        print(f"canonical form: {poly}")
        v = symbolic_test(c)
    else:
        v = sample_test(c, "uniform", args.trials, args.seed)
    print(json.dumps(v.to_dict(), sort_keys=True))
    return 0


def cmd_synth_decider(args) -> int:
    _write(args.out, to_netlist(harness.synth_decider(args.n, _profile(args))))
    return 0


def cmd_mutate(args) -> int:
    c = parse_netlist(_read(args.circuit))
    if not isinstance(c, BoolCircuit):
        raise InputError("mutate expects a boolean netlist")
    mutant, note = harness.mutate(c, args.op, args.seed, args.bit)
    _write(args.out, to_netlist(mutant))
    info = note.to_dict()
    if args.classify:
        info["classification"] = harness.classify(mutant, args.n, _profile(args)).to_dict()
    print(json.dumps(info, sort_keys=True), file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return 0


def cmd_pipeline(args) -> int:
    pr = _profile(args)
    F = parse_field(args.field)
    dec, prov = _load_decider(args.decider, args.n, pr)
    if args.mutate:
        dec, note = harness.mutate(dec, args.mutate, args.seed)
        prov = {"kind": "mutant", "base": prov, "mutation": note.to_dict()}
    testers = [harness.TesterConfig.parse(t) for t in (args.tester or ["exhaustive"])]
    report = harness.run_pipeline(dec, args.n, pr, F, testers, args.seed, prov)
    if args.json:
        Path(args.json).write_text(report.to_json())
    print(report.summary())
    return 0


def cmd_demo(args) -> int:
    result = harness.demo(seed=args.seed, mutants=args.mutants)
    for field, rows in result["fields"].items():
        print(
            f"GF({field}): correct decider -> {rows['correct']}; "
            f"{rows['refuted']}/{rows['behavioral']} behavioral mutants refuted with verified witnesses; "
            f"{rows['masked_zero']}/{rows['masked']} masked mutants certified zero"
        )
    ok = all(
        r["correct"] == "IdenticallyZero" and r["refuted"] == r["behavioral"] and r["masked_zero"] == r["masked"]
        for r in result["fields"].values()
    )
    print("equivalence holds in both directions" if ok else "EQUIVALENCE VIOLATED")
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pitreduce", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def prof(sp, n_default=2):
        sp.add_argument("--n", type=int, default=n_default)
        sp.add_argument("--profile", choices=["paper", "mini"], default="paper")

    sp = sub.add_parser("encode", help="DIMACS instance -> 0/1 encoding")
    prof(sp)
    sp.add_argument("instance", help="DIMACS file or -")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="0/1 encodings (one per line) -> DIMACS")
    prof(sp)
    sp.add_argument("encodings", help="file or -")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("arithmetize", help="boolean netlist -> arithmetic netlist")
    sp.add_argument("--circuit", required=True)
    sp.add_argument("--field", default="2^1")
    sp.add_argument("--out")
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_arithmetize)

    sp = sub.add_parser("build-reduction", help="export V, S0, S1, G, H, A_star netlists")
    prof(sp)
    sp.add_argument("--field", default="2^1")
    sp.add_argument("--decider", default="synth")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_build_reduction)

    sp = sub.add_parser("pit", help="identity-test an arithmetic netlist")
    sp.add_argument("--circuit", required=True)
    sp.add_argument("--tester", choices=["exhaustive", "symbolic", "uniform"], default="exhaustive")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_pit)

    sp = sub.add_parser("synth-decider", help="write the decode-and-evaluate decider netlist")
    prof(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_synth_decider)

    sp = sub.add_parser("mutate", help="apply one seeded mutation to a boolean netlist")
    prof(sp)
    sp.add_argument("--circuit", required=True)
    sp.add_argument("--op", required=True, choices=["flip_gate_kind", "negate_output", "rewire_operand", "stuck_at_0", "stuck_at_1"])
    sp.add_argument("--bit", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--classify", action="store_true", help="sweep the oracle over valid encodings")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("pipeline", help="build the reduction and run PIT testers")
    prof(sp)
    sp.add_argument("--field", default="2^1")
    sp.add_argument("--decider", default="synth", help="'synth' or a boolean netlist file")
    sp.add_argument("--mutate", choices=["flip_gate_kind", "negate_output", "rewire_operand", "stuck_at_0", "stuck_at_1"])
    sp.add_argument("--tester", action="append",
                    help="exhaustive | symbolic | uniform[:trials] | structured[:trials]; repeatable")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json", help="write the machine-readable report here")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("demo", help="mini-profile demonstration of both directions")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mutants", type=int, default=20)
    sp.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 2
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
