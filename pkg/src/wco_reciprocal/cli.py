"""Command-line front end.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import mp_oracle, report, theorem_suite
from .measure_space import ValidationError, WeightedSymbol
from .operator_core import FRAME, kernel_projector, matrix_of, radon_nikodym
from .reciprocal import (
    adjoint_reciprocal_matrix,
    composition_reciprocal_matrix,
    hat_weight,
    multiplication_reciprocal_matrix,
    reciprocal_pair,
)
from .scenarios import KINDS, PROFILES, ScenarioSpec, shift_diagnostics

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _parse_tol(items: list[str] | None) -> dict[str, float]:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise InputError(f"--tol expects name=value, got {item!r}")
        try:
            val = float(value)
        except ValueError:
            raise InputError(f"--tol value for {name!r} is not a number") from None
        if not val > 0:
            raise InputError(f"--tol value for {name!r} must be positive")
        out[name] = val
    return out


def _specs(args) -> list[ScenarioSpec]:
    specs = [ScenarioSpec("explicit", path=p) for p in args.scenario or []]
    if args.builtin:
        if args.builtin == "random":
            specs += [
                ScenarioSpec("random", n=args.n, seed=args.seed + k, profile=args.profile)
                for k in range(args.count)
            ]
        else:
            if args.count != 1:
                raise InputError("--count only applies to --builtin random")
            specs.append(
                ScenarioSpec(
                    args.builtin, n=args.n, alpha=args.alpha, mass_ratio=args.q, weights=args.weights
                )
            )
    if not specs:
        raise InputError("no scenarios")
    return specs


def provenance(spec: ScenarioSpec) -> dict:
    """Inputs that regenerate the scenario: the file path, or the generator arguments."""
    if spec.kind == "explicit":
        return {"kind": "explicit", "path": spec.path}
    out = {"kind": spec.kind, "n": spec.n}
    if spec.kind == "random":
        out.update(seed=spec.seed, profile=spec.profile, prng="splitmix64")
    elif spec.kind == "hiszpa":
        out.update(alpha=spec.alpha, weights=spec.weights)
    elif spec.kind == "hiszpa_minus":
        out["mass_ratio"] = spec.mass_ratio
    return out


def _load(spec: ScenarioSpec) -> WeightedSymbol:
    try:
        return spec.build()
    except FileNotFoundError:
        raise InputError(f"cannot read scenario file {spec.path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read scenario {spec.scenario_id}: {exc}") from None
    except (ValidationError, ValueError, TypeError) as exc:
        raise InputError(f"invalid scenario {spec.scenario_id}: {exc}") from None


def verify_scenario(spec: ScenarioSpec, symbol: WeightedSymbol, tol) -> report.VerificationReport:
    rep, _ = theorem_suite.run_all(symbol, tol, spec.scenario_id)
    if spec.kind == "hiszpa":
        rep.extend(theorem_suite.check_hiszpa(symbol, tol, spec.scenario_id))
    if spec.kind in ("hiszpa_plus", "hiszpa_minus"):
        rep.quantities["truncation_diagnostics"] = shift_diagnostics(symbol)
    rep.quantities["provenance"] = provenance(spec)
    return rep


def report_quantities(symbol: WeightedSymbol) -> dict:
    pair = reciprocal_pair(symbol)
    plain = symbol.unweighted()
    return {
        "frame": FRAME,
        "labels": list(symbol.space.labels),
        "h_phi_w": radon_nikodym(symbol),
        "h_phi": radon_nikodym(plain),
        "w_hat": hat_weight(symbol),
        "one_hat": hat_weight(plain),
        "C": pair.forward,
        "C_reciprocal": pair.reciprocal,
        "C_adjoint_reciprocal": adjoint_reciprocal_matrix(symbol),
        "M_w_reciprocal": multiplication_reciprocal_matrix(symbol),
        "C_phi_reciprocal": composition_reciprocal_matrix(symbol),
        "kernel_projection": kernel_projector(symbol),
        "range_projection": pair.range_proj,
        "singular_values": mp_oracle.svd(matrix_of(symbol)).singular_values,
    }


def run_verify(specs, tol) -> list[report.VerificationReport]:
    return [verify_scenario(spec, _load(spec), tol) for spec in specs]


def run_report(specs, tol) -> list[report.VerificationReport]:
    out = []
    for spec in specs:
        symbol = _load(spec)
        rep = theorem_suite.check_reciprocal_theorem(symbol, tol, spec.scenario_id)
        rep.quantities.update(report_quantities(symbol))
        rep.quantities["provenance"] = provenance(spec)
        out.append(rep)
    return out


def run_conditions(specs, tol) -> list[report.VerificationReport]:
    profiles = []
    for spec in specs:
        profiles.append(theorem_suite.evaluate_dt_conditions(_load(spec), tol, spec.scenario_id))
    sid = specs[0].scenario_id if len(specs) == 1 else f"sweep-{specs[0].scenario_id}-x{len(specs)}"
    rep = theorem_suite.check_dt_implications(profiles, sid)
    rep.quantities["profiles"] = [p.to_dict() for p in profiles]
    rep.quantities["provenance"] = [provenance(spec) for spec in specs]
    return [rep]


def _conditions_table(rep: report.VerificationReport) -> str:
    fields = theorem_suite.DtConditionProfile.FIELDS
    lines = ["scenario".ljust(44) + "".join(f.ljust(8) for f in fields)]
    for prof in rep.quantities["profiles"]:
        lines.append(
            prof["scenario_id"].ljust(44)
            + "".join(prof[f]["status"][:6].ljust(8) for f in fields)
        )
    return "\n".join(lines)


def render(reports: list[report.VerificationReport], fmt: str, command: str) -> str:
    if fmt == "json":
        if len(reports) == 1:
            return report.dumps(reports[0].to_dict())
        return report.dumps([r.to_dict() for r in reports])
    parts = []
    for rep in reports:
        parts.append(rep.to_text())
        if command == "conditions":
            parts.append(_conditions_table(rep))
        elif command == "report":
            q = rep.quantities
            with np.printoptions(precision=6, suppress=True, linewidth=120):
                for key in ("h_phi_w", "h_phi", "singular_values"):
                    parts.append(f"{key}: {np.asarray(q[key])}")
                parts.append(f"C_reciprocal:\n{np.asarray(q['C_reciprocal'])}")
    return "\n".join(parts) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wco-reciprocal",
        description="Reciprocals of weighted composition operators on finite discrete spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run every applicable check on each scenario"),
        ("report", "emit densities, derived weights, reciprocal matrices and singular values"),
        ("conditions", "evaluate the six product-reciprocal conditions and their implication chain"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", action="append", metavar="PATH", help="scenario JSON file (repeatable)")
        p.add_argument("--builtin", choices=[k for k in KINDS if k != "explicit"])
        p.add_argument("--n", type=int, default=4, help="truncation size, or number of atoms for random")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--count", type=int, default=1, help="number of consecutive seeds for random sweeps")
        p.add_argument("--profile", choices=PROFILES, default="generic")
        p.add_argument("--alpha", type=float, default=0.5)
        p.add_argument("--q", type=float, default=0.25, help="mass ratio for hiszpa_minus")
        p.add_argument("--weights", choices=("unit", "varied"), default="unit", help="weights for hiszpa")
        p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="tolerance override (repeatable)")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--format", choices=("json", "text"), default="json")
    return parser


COMMANDS = {"verify": run_verify, "report": run_report, "conditions": run_conditions}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = _parse_tol(args.tol)
        specs = _specs(args)
        reports = COMMANDS[args.command](specs, tol)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    text = render(reports, args.format, args.command)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
