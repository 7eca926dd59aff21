"""Command-line driver; every command prints one JSON report.

Exit status: 0 when the report passes, 1 when it fails, 2 when the input
cannot be read or parsed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .adversary import make_adversary
from .circuit_io import ParseError, load, parse_protocol, validate
from .gate_algebra import verify_catalog
from .impossibility import NAIVE_PROTOCOL, BareProtocol, ModelError, no_single_message_transition
from .privacy import privacy_gap, rushing_check
from .protocol import (DEFAULT_INPUTS, ProtocolConfig, ideal_output, input_state, run_protocol)
from .qstate import trace_distance

SCHEMA = "2pqc-report/1"
ALGEBRA_TOL = 1e-12


class InputError(Exception):
    """Bad user input; maps to exit status 2."""


def _circuit(path: str):
    try:
        c = load(path)
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror or err}") from None
    except ParseError as err:
        raise InputError(f"{path}: {err}") from None
    diag = validate(c)
    if not diag.ok:
        raise InputError(f"{path}: " + "; ".join(diag.errors))
    return c, diag


def _inputs(circuit, manifest: str | None):
    """Input family: the default kinds, or a JSON list of kind names."""
    kinds = list(DEFAULT_INPUTS)
    if manifest:
        try:
            data = json.loads(Path(manifest).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as err:
            raise InputError(f"cannot read input manifest {manifest}: {err}") from None
        kinds = data.get("inputs", data) if isinstance(data, dict) else data
        if not isinstance(kinds, list) or not kinds:
            raise InputError("input manifest must list input kinds")
    try:
        return [(k, input_state(circuit, k)) for k in kinds]
    except ValueError as err:
        raise InputError(str(err)) from None


def _report(args, results: dict, passed: bool, epsilon=None) -> dict:
    return {"schema": SCHEMA, "version": __version__, "command": args.command,
            "circuit_path": getattr(args, "circuit", None) or getattr(args, "protocol", None),
            "seed": args.seed, "tolerance": args.tolerance, "epoch": args.epoch,
            "results": results, "measured_epsilon": epsilon, "pass": bool(passed)}


# --- commands ---------------------------------------------------------------

def cmd_check_correctness(args) -> dict:
    c, diag = _circuit(args.circuit)
    fam = _inputs(c, args.inputs)
    predicted = c.oracle_counts(args.release)
    worst, per_input, counts_ok = 0.0, {}, True
    for name, psi in fam:
        ideal = ideal_output(c, psi)
        m = 0.0
        for t in range(args.trials):
            cfg = ProtocolConfig(c, seed=args.seed + t, tolerance=args.tolerance, release=args.release)
            out, tr = run_protocol(cfg, psi)
            m = max(m, trace_distance(out, ideal))
            counts_ok &= tr.counts() == predicted
        per_input[name] = m
        worst = max(worst, m)
    res = {"trials": args.trials, "release": args.release, "max_delta": worst, "per_input": per_input,
           "predicted_counts": predicted.as_dict(), "counts_match": counts_ok,
           "clifford_only": diag.clifford_only, "warnings": diag.warnings}
    return _report(args, res, worst <= args.tolerance and counts_ok)


def cmd_check_privacy(args) -> dict:
    c, _ = _circuit(args.circuit)
    fam = _inputs(c, args.inputs)
    cfg = ProtocolConfig(c, seed=args.seed, tolerance=args.tolerance, release=args.release,
                         first_announcer=args.first_announcer)
    adv = make_adversary(args.adversary, args.party)
    rep = privacy_gap(cfg, adv, fam, phase=args.phase, dummy=args.dummy)
    res = rep.to_json()
    res["phase"] = args.phase
    return _report(args, res, rep.passed, rep.epsilon)


def cmd_rushing(args) -> dict:
    c, _ = _circuit(args.circuit)
    fam = _inputs(c, args.inputs)
    cfg = ProtocolConfig(c, seed=args.seed, tolerance=args.tolerance, release=args.release,
                         first_announcer=args.first_announcer)
    rep = rushing_check(make_adversary(args.adversary, args.party), cfg, fam)
    return _report(args, rep.to_json(), rep.passed, rep.epsilon)


def cmd_demo_noswap(args) -> dict:
    if args.protocol:
        try:
            text = Path(args.protocol).read_text(encoding="utf-8")
        except OSError as err:
            raise InputError(f"cannot read {args.protocol}: {err.strerror or err}") from None
    else:
        text = NAIVE_PROTOCOL
    try:
        proto = BareProtocol(parse_protocol(text))
    except (ParseError, ModelError) as err:
        raise InputError(str(err)) from None
    rep = no_single_message_transition(proto)
    # the demonstration succeeds when it exhibits a failure of the candidate
    return _report(args, rep.to_json(), rep.witness)


def cmd_verify_algebra(args) -> dict:
    rows = verify_catalog()
    worst = max(r["max_error"] for r in rows)
    ok = all(r["ok"] for r in rows) and worst <= ALGEBRA_TOL
    return _report(args, {"rules": rows, "max_error": worst, "n_rules": len(rows)}, ok)


COMMANDS = {
    "check-correctness": cmd_check_correctness,
    "check-privacy": cmd_check_privacy,
    "rushing": cmd_rushing,
    "demo-noswap": cmd_demo_noswap,
    "verify-algebra": cmd_verify_algebra,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtwoparty", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=1e-9)
    common.add_argument("--json-out", help="also write the report to this file")
    common.add_argument("--epoch", type=int, default=0, help="fixed timestamp recorded in the report")
    sub = ap.add_subparsers(dest="command", required=True)

    def circuit_cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--circuit", required=True, help=".qc2p circuit file")
        p.add_argument("--inputs", help="JSON list of input kinds (zero, plus, epr)")
        p.add_argument("--release", choices=("swap", "naive"), default="swap")
        p.add_argument("--first-announcer", choices=("A", "B"), default="B",
                       help="who announces first under naive release")
        return p

    p = circuit_cmd("check-correctness", "final state against (U x I) rho_in")
    p.add_argument("--trials", type=int, default=10)
    p = circuit_cmd("check-privacy", "per-step simulator distances")
    p.add_argument("--phase", choices=("eval", "release", "all"), default="all")
    p.add_argument("--adversary", default="honest",
                   choices=("honest", "purified_honest", "bit_flip", "rushing"))
    p.add_argument("--party", choices=("A", "B"), default="A")
    p.add_argument("--dummy", choices=("zero", "plus"), default="zero",
                   help="dummy input of the key-release simulator")
    p = circuit_cmd("rushing", "tensor-product form of the final state")
    p.add_argument("--adversary", default="honest",
                   choices=("honest", "purified_honest", "bit_flip", "rushing"))
    p.add_argument("--party", choices=("A", "B"), default="A")
    p = sub.add_parser("demo-noswap", parents=[common], help="bare-model SWAP witness")
    p.add_argument("--protocol", help="protocol file (default: send a0, then send b0)")
    sub.add_parser("verify-algebra", parents=[common], help="commutation rule catalog")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return 2
    if not args.tolerance > 0:
        print("error: --tolerance must be positive", file=sys.stderr)
        return 2
    try:
        report = COMMANDS[args.command](args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if args.json_out:
        Path(args.json_out).write_text(text, encoding="utf-8")
    return 0 if report["pass"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
