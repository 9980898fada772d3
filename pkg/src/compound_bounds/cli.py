"""Command-line interface.

Exit status: 0 success, 2 usage error, 3 domain error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Optional, Sequence

from compound_bounds import excitation as exc
from compound_bounds import relativity as rel
from compound_bounds import scattering as sc
from compound_bounds import verify as ver
from compound_bounds.bounds_core import bound_interval, polygon_satisfied
from compound_bounds.errors import ConsistencyError, DomainError
from compound_bounds.euclid_walk import Walk, displacement_bounds, plan_angles, resultant

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


def load_payload(text: str) -> Any:
    """Parse inline JSON, or read it from ``@path`` / an existing file path."""
    if text.startswith("@"):
        path = text[1:]
    elif os.path.isfile(text):
        path = text
    else:
        path = None
    try:
        if path is not None:
            with open(path) as fh:
                return json.load(fh)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot parse JSON payload {text!r}: {err}") from None


def _number_list(value: Any, name: str) -> list[float]:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value:
        raise UsageError(f"--{name} expects a nonempty JSON array of numbers")
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise UsageError(f"--{name} expects numbers, got {v!r}")
    return [float(v) for v in value]


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _table(obj: Any, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            lines.extend(_table(v, f"{prefix}{k}." if isinstance(v, dict) else f"{prefix}{k}"))
        return lines
    return [f"{prefix:<32} {json.dumps(obj)}"]


# -- subcommands ----------------------------------------------------------------


def cmd_walk(args) -> dict:
    if args.walk is not None:
        walk = Walk.from_dict(load_payload(args.walk))
        vec, norm = resultant(walk)
        out = {"interval": displacement_bounds(walk.lengths).to_dict()}
        out["resultant"] = {"vector": [float(x) for x in vec], "magnitude": norm}
        return out
    if args.lengths is None:
        raise UsageError("walk needs --lengths or --walk")
    lengths = _number_list(load_payload(args.lengths), "lengths")
    out = {
        "interval": displacement_bounds(lengths).to_dict(),
        "polygon": polygon_satisfied(lengths) if len(lengths) >= 2 else None,
    }
    if args.target is not None:
        out["walk"] = plan_angles(lengths, args.target).to_dict()
    return out


def cmd_velocity(args) -> dict:
    if args.speeds is None:
        raise UsageError("velocity needs --speeds")
    speeds = _number_list(load_payload(args.speeds), "speeds")
    if args.collinear:
        out = {"speed": rel.collinear_chain(speeds)}
        if len(speeds) in (3, 4):
            out["explicit"] = rel.collinear_explicit(speeds)
        return out
    out = {
        "interval": rel.speed_bounds(speeds).to_dict(),
        "rapidity_interval": rel.rapidity_bounds(speeds).to_dict(),
    }
    if len(speeds) in (3, 4):
        out["explicit_upper"] = rel.speed_upper_explicit(speeds)
    if args.target is not None:
        out["angles"] = rel.plan_relative_angles(speeds, args.target)
    return out


def _barriers_from_args(args) -> tuple[list[sc.BarrierSpec], Optional[list[sc.TransferMatrix]]]:
    given = [f for f in ("T", "R", "theta", "barriers") if getattr(args, f) is not None]
    if len(given) != 1:
        raise UsageError("barriers needs exactly one of --T, --R, --theta, --barriers")
    flag = given[0]
    payload = load_payload(getattr(args, flag))
    if flag == "barriers":
        if not isinstance(payload, list) or not payload:
            raise UsageError("--barriers expects a nonempty JSON array of objects")
        specs, matrices = [], []
        for item in payload:
            if not isinstance(item, dict):
                raise UsageError(f"barrier entries must be objects, got {item!r}")
            if "T" in item:
                if "phi" in item or "psi" in item:
                    raise UsageError("phases require the theta form of a barrier")
                specs.append(sc.BarrierSpec.from_T(item["T"]))
                # a T-only barrier has no phases, so the chain cannot be composed
                matrices = None
            elif "theta" in item:
                specs.append(sc.BarrierSpec.from_theta(item["theta"]))
                if matrices is not None:
                    matrices.append(sc.from_theta_phases(
                        item["theta"], item.get("phi", 0.0), item.get("psi", 0.0)))
            else:
                raise UsageError(f"barrier object needs 'T' or 'theta': {item!r}")
        return specs, matrices
    values = _number_list(payload, flag)
    if flag == "T":
        return [sc.BarrierSpec.from_T(t) for t in values], None
    if flag == "R":
        return [sc.BarrierSpec.from_R(r) for r in values], None
    return [sc.BarrierSpec.from_theta(t) for t in values], None


def cmd_barriers(args) -> dict:
    specs, matrices = _barriers_from_args(args)
    t_int, r_int = sc.n_barrier_bounds(specs)
    out = {
        "T": t_int.to_dict(),
        "R": r_int.to_dict(),
        "theta": sc.theta_bounds(specs).to_dict(),
    }
    if len(specs) == 2:
        t2, r2 = sc.two_barrier_bounds(*specs)
        out["closed_form"] = {"T": t2.to_dict(), "R": r2.to_dict()}
    elif len(specs) in (3, 4):
        t_low, r_up = sc.closed_form_bounds_34(specs)
        out["closed_form"] = {"T_lower": t_low, "R_upper": r_up}
    if matrices:
        m = sc.compose_transfer(matrices)
        t, r = sc.transmission_reflection(m)
        out["composed"] = {"T": t, "R": r, "theta": m.theta}
    if args.target is not None:
        out["phases"] = [list(p) for p in sc.plan_phases(specs, args.target)]
    return out


def cmd_excitation(args) -> dict:
    if (args.N is None) == (args.theta is None):
        raise UsageError("excitation needs exactly one of --N, --theta")
    if args.N is not None:
        ns = _number_list(load_payload(args.N), "N")
    else:
        ns = [exc.theta_n(t) for t in _number_list(load_payload(args.theta), "theta")]
    out = {
        "interval": exc.n_event_bounds(ns).to_dict(),
        "theta_interval": bound_interval(exc.theta_list(ns)).to_dict(),
    }
    if len(ns) == 2:
        out["closed_form"] = exc.two_event_bounds(*ns).to_dict()
    elif len(ns) in (3, 4):
        out["closed_form"] = {"upper": exc.closed_form_upper_34(ns)}
    return out


def _verify_params(args, domain: str) -> list[float]:
    flags = {"lengths": args.lengths, "speeds": args.speeds, "T": args.T, "N": args.N,
             "theta": args.theta}
    given = {k: v for k, v in flags.items() if v is not None}
    if len(given) != 1:
        raise UsageError("verify needs exactly one of --lengths, --speeds, --T, --N, --theta")
    (flag, text), = given.items()
    values = _number_list(load_payload(text), flag)
    if flag == "theta":
        if domain == "barrier":
            return [sc.BarrierSpec.from_theta(t).transmission for t in values]
        if domain == "excitation":
            return [exc.theta_n(t) for t in values]
        if domain == "velocity":
            return [rel.rapidity_to_speed(t) for t in values]
    return values


def cmd_verify(args) -> dict:
    try:
        domain = ver.canonical_domain(args.domain)
    except DomainError as err:
        raise UsageError(str(err)) from None
    if args.check == "cross":
        report = ver.cross_formula_check(domain, args.samples, args.seed)
    else:
        params = _verify_params(args, domain)
        if args.check == "saturation":
            report = ver.saturation_check(domain, params, args.grid, args.tol)
        else:
            report = ver.mc_containment(domain, params, args.samples, args.seed, args.tol,
                                        dim=args.dim, workers=args.workers)
    return report.to_dict()


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=10_000)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--grid", type=int, default=11)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--json", dest="output", action="store_const", const="json", default="json")
    mode.add_argument("--table", dest="output", action="store_const", const="table")

    parser = argparse.ArgumentParser(
        prog="compound-bounds",
        description="Bounds on compound walks, velocities, barriers and excitations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("walk", parents=[common], help="displacement bounds for a walk")
    p.add_argument("--lengths", help="JSON array of step lengths")
    p.add_argument("--walk", help="JSON walk {lengths, directions, dim}; prints its resultant")
    p.add_argument("--target", type=float, help="also emit a planar walk reaching this displacement")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("velocity", parents=[common], help="relativistic speed bounds")
    p.add_argument("--speeds", help="JSON array of speeds (units of c)")
    p.add_argument("--collinear", action="store_true",
                   help="treat speeds as signed collinear velocities and compose them exactly")
    p.add_argument("--target", type=float, help="also emit joint angles reaching this speed")
    p.set_defaults(func=cmd_velocity)

    p = sub.add_parser("barriers", parents=[common], help="transmission/reflection bounds")
    p.add_argument("--T", help="JSON array of transmission probabilities")
    p.add_argument("--R", help="JSON array of reflection probabilities")
    p.add_argument("--theta", help="JSON array of barrier theta parameters")
    p.add_argument("--barriers", help='JSON array of {"T": t} or {"theta", "phi", "psi"} objects')
    p.add_argument("--target", type=float, help="also emit phases reaching this total theta")
    p.set_defaults(func=cmd_barriers)

    p = sub.add_parser("excitation", parents=[common], help="particle production bounds")
    p.add_argument("--N", help="JSON array of particle numbers per event")
    p.add_argument("--theta", help="JSON array of event theta parameters")
    p.set_defaults(func=cmd_excitation)

    p = sub.add_parser("verify", parents=[common], help="containment/saturation/identity checks")
    p.add_argument("--domain", required=True, help="walk | velocity | barrier | excitation")
    p.add_argument("--check", choices=("containment", "saturation", "cross"), default="containment")
    p.add_argument("--lengths")
    p.add_argument("--speeds")
    p.add_argument("--T")
    p.add_argument("--N")
    p.add_argument("--theta")
    p.add_argument("--dim", type=int, default=3, help="walk sampling dimension (>= 2)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except UsageError as err:
        print(f"{parser.prog} {args.command}: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ConsistencyError) as err:
        print(f"{parser.prog} {args.command}: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.output == "table":
        print("\n".join(_table(out)))
    else:
        print(dumps(out))
    if args.command == "verify" and not out["passed"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
