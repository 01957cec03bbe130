"""Command-line front door: `owl <subcommand>`.

Reports are JSON by default (deterministic: sorted keys, seed echoed) with
a --pretty-ish human format behind --format pretty. Exit codes: 0 when
everything is consistent or nothing was found, 1 when a counterexample or
verification failure was produced, 2 on usage or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__, adversary, exits, owl, sequence, tdfa
from .matrix import BoolMatrix
from .owl import OwlString
from .tdfa import Tdfa

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_USAGE = 2


class CliError(Exception):
    pass


def load_machine(spec: str, height: int | None) -> Tdfa:
    """A machine file path, or a builtin name: accept_all[:h], subset:h,
    broken:h:cap."""
    import os

    if os.path.exists(spec):
        try:
            m = Tdfa.load(spec)
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot load machine {spec!r}: {exc}")
    else:
        parts = spec.split(":")
        try:
            if parts[0] == "accept_all" and len(parts) <= 2:
                h = int(parts[1]) if len(parts) == 2 else height
                if h is None:
                    raise CliError("accept_all needs --height or accept_all:h")
                m = tdfa.build_accept_all(h)
            elif parts[0] == "subset" and len(parts) == 2:
                m = tdfa.build_subset_solver(int(parts[1]))
            elif parts[0] == "broken" and len(parts) == 3:
                m = tdfa.build_broken_solver(int(parts[1]), int(parts[2]))
            else:
                raise CliError(f"unknown machine {spec!r} (not a file or builtin name)")
        except ValueError as exc:
            raise CliError(f"bad machine spec {spec!r}: {exc}")
    violations = tdfa.validate(m)
    if violations:
        raise CliError(f"machine {spec!r} is invalid: " + "; ".join(violations))
    return m


def load_string(path: str) -> OwlString:
    try:
        with open(path) as f:
            return OwlString.from_json(json.load(f))
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot load input string {path!r}: {exc}")


def _emit(report: dict, args, stream=None) -> None:
    if stream is None:
        stream = sys.stdout
    if args.format == "pretty":
        _pretty(report, stream)
    else:
        json.dump(report, stream, sort_keys=True, indent=2)
        stream.write("\n")


def _pretty(obj, stream, indent=0) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                stream.write(f"{pad}{k}:\n")
                _pretty(v, stream, indent + 1)
            else:
                stream.write(f"{pad}{k}: {v}\n")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                _pretty(v, stream, indent + 1)
            else:
                stream.write(f"{pad}- {v}\n")
    else:
        stream.write(f"{pad}{obj}\n")


def _report(args, command: str, result: dict, started: float) -> dict:
    rep = {
        "command": command,
        "config": {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("func", "format", "no_timing") and v is not None
        },
        "version": __version__,
        "result": result,
    }
    if not args.no_timing:
        rep["timing_s"] = round(time.monotonic() - started, 3)
    return rep


def cmd_seq(args) -> tuple[int, dict | str]:
    seq = sequence.build_sequence(args.height)
    if args.index is not None:
        h, t = args.height, args.index
        kinds = {
            "c": lambda: seq[t],
            "e": lambda: sequence.e_matrix(t, h),
            "eprime": lambda: sequence.e_prime(t, h),
            "d": lambda: sequence.d_matrix(t, h),
            "dprime": lambda: sequence.d_prime(t, h),
        }
        try:
            mat = kinds[args.kind]()
        except ValueError as exc:
            raise CliError(str(exc))
        return EXIT_OK, mat.to_text()
    return EXIT_OK, seq.to_json()


def cmd_verify_seq(args) -> tuple[int, dict]:
    rep = sequence.verify_sequence(args.height, seed=args.seed)
    return (EXIT_OK if rep.ok else EXIT_FOUND), rep.to_json()


def cmd_run(args) -> tuple[int, dict]:
    m = load_machine(args.machine, args.height)
    z = load_string(args.input)
    if z.h != m.h:
        raise CliError(f"input height {z.h} does not match machine height {m.h}")
    res = tdfa.run_on_tape(m, z)
    out = {
        "decision": tdfa.decide(m, z),
        "steps": res.steps,
        "live": owl.is_live(z),
    }
    if args.trace and res.trace is not None:
        out["trace"] = [list(c) for c in res.trace]
    return EXIT_OK, out


def cmd_exits(args) -> tuple[int, dict]:
    m = load_machine(args.machine, args.height)
    z = load_string(args.input)
    side = exits.LR if args.side == "lr" else exits.RL
    tm = exits.traversal_map(m, z, side)
    return EXIT_OK, {
        "side": args.side,
        "exit_states": sorted(tm.exit_states),
        "exit_size": tm.exit_size,
        "outcomes": {
            q: {"outcome": c.outcome, "state": c.state, "steps": c.steps}
            for q, c in sorted(tm.outcomes.items())
        },
    }


def _target_matrix(args, m: Tdfa) -> BoolMatrix:
    if (args.conn is None) == (args.matrix is None):
        raise CliError("supply exactly one of --conn, --matrix")
    if args.conn is not None:
        seq = sequence.build_sequence(m.h)
        if not 0 <= args.conn <= seq.N:
            raise CliError(f"--conn must be in [0, {seq.N}] for h={m.h}")
        return seq[args.conn]
    try:
        with open(args.matrix) as f:
            return BoolMatrix.from_text(f.read())
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot load matrix {args.matrix!r}: {exc}")


def cmd_generic(args) -> tuple[int, dict]:
    m = load_machine(args.machine, args.height)
    target = _target_matrix(args, m)
    side = exits.LR if args.side == "lr" else exits.RL
    cert = exits.descend_generic(
        m, target, max_ext_len=args.max_ext_len, max_rounds=args.max_rounds, side=side
    )
    return EXIT_OK, cert.to_json()


def cmd_chain(args) -> tuple[int, dict]:
    m = load_machine(args.machine, args.height)
    rep = adversary.exit_chain(m, m.h, max_ext_len=args.max_ext_len)
    return EXIT_OK, rep.to_json()


def cmd_pump(args) -> tuple[int, dict]:
    m = load_machine(args.machine, args.height)
    res = adversary.pump(m, args.index, max_ext_len=args.max_ext_len)
    code = EXIT_FOUND if isinstance(res, adversary.Counterexample) else EXIT_OK
    return code, res.to_json()


def cmd_fuzz(args) -> tuple[int, dict]:
    m = load_machine(args.machine, args.height)
    res = adversary.differential_fuzz(
        m,
        m.h,
        max_len=args.max_len,
        exhaustive=args.exhaustive,
        samples=args.samples,
        seed=args.seed,
    )
    code = EXIT_FOUND if isinstance(res, adversary.Counterexample) else EXIT_OK
    return code, res.to_json()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="owl", description=__doc__)
    p.add_argument("--format", choices=["json", "pretty"], default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="parallel work items; output order is deterministic regardless")
    p.add_argument("--no-timing", action="store_true", help="omit timing for byte-identical reruns")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def machine_opts(sp, need_input=False):
        sp.add_argument("--machine", required=True, help="machine JSON file or builtin name")
        sp.add_argument("--height", type=int, help="height for builtin machines")
        if need_input:
            sp.add_argument("--input", required=True, help="input string JSON file")

    sp = sub.add_parser("seq", help="emit chain matrices")
    sp.add_argument("--height", type=int, required=True)
    sp.add_argument("--index", type=int, help="emit a single matrix as text")
    sp.add_argument("--kind", choices=["c", "e", "eprime", "d", "dprime"], default="c")
    sp.set_defaults(func=cmd_seq)

    sp = sub.add_parser("verify-seq", help="machine-check every chain identity")
    sp.add_argument("--height", type=int, required=True)
    sp.set_defaults(func=cmd_verify_seq)

    sp = sub.add_parser("run", help="decide one input")
    machine_opts(sp, need_input=True)
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("exits", help="per-state traversal outcomes and exit set")
    machine_opts(sp, need_input=True)
    sp.add_argument("--side", choices=["lr", "rl"], default="lr")
    sp.set_defaults(func=cmd_exits)

    sp = sub.add_parser("generic", help="bounded genericity descent")
    machine_opts(sp)
    sp.add_argument("--conn", type=int, help="chain index of the target connectivity")
    sp.add_argument("--matrix", help="text matrix file with the target connectivity")
    sp.add_argument("--side", choices=["lr", "rl"], default="lr")
    sp.add_argument("--max-ext-len", type=int, default=1)
    sp.add_argument("--max-rounds", type=int, default=None)
    sp.set_defaults(func=cmd_generic)

    sp = sub.add_parser("chain", help="exit-size chain along all properties")
    machine_opts(sp)
    sp.add_argument("--max-ext-len", type=int, default=1)
    sp.set_defaults(func=cmd_chain)

    sp = sub.add_parser("pump", help="pumping attack at one chain step")
    machine_opts(sp)
    sp.add_argument("--index", type=int, required=True, help="chain step t >= 1")
    sp.add_argument("--max-ext-len", type=int, default=1)
    sp.set_defaults(func=cmd_pump)

    sp = sub.add_parser("fuzz", help="differential test against the liveness oracle")
    machine_opts(sp)
    sp.add_argument("--max-len", type=int, default=4)
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--samples", type=int, default=1000)
    sp.set_defaults(func=cmd_fuzz)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        code, result = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, str):  # raw text matrix output
        sys.stdout.write(result)
    else:
        _emit(_report(args, args.subcommand, result, started), args)
    return code


if __name__ == "__main__":
    sys.exit(main())
