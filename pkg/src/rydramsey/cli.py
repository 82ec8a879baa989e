"""Command line entry point.

Subcommands map one-to-one onto the runners in ``experiments``:

    rydramsey fig2 --config configs/sr_dressed.json --out out/fig2
    rydramsey validate --out out/validate --seed 7

Exit codes: 0 success, 2 configuration or parameter problems,
3 numerical failures (non-converged quadrature, missing crossing,
oversized oracle request), 4 a validation run that completed but found
disagreement.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import RunConfig, load_config
from .errors import (
    CapacityError,
    ConfigError,
    CrossingNotFoundError,
    NumericalError,
    ParameterError,
    UnsupportedRegimeError,
)
from .experiments import (
    parse_grid,
    run_fig2,
    run_fig3,
    run_fig4,
    run_fig5,
    run_scan,
    run_validate,
)
from .ising_core import RamseyProtocol

_GRID_AXIS = {
    "fig2": "V0*t",
    "fig3": "V0*t (curves)",
    "fig4": "V0*t (trace)",
    "fig5": "t in ps",
    "scan": "N_R",
    "validate": "unused",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydramsey",
        description="Ramsey contrast of dressed Rydberg spin ensembles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("fig2", "fig3", "fig4", "fig5", "scan", "validate"):
        sp = sub.add_parser(name, help=f"run the {name} pipeline")
        sp.add_argument(
            "--config",
            default=None,
            help="JSON parameter file (required for everything except validate)",
        )
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seed", type=int, default=0, help="RNG seed")
        sp.add_argument(
            "--grid",
            default=None,
            help=(
                "override the sweep grid, kind:start:stop:n with kind lin|log; "
                f"axis for {name}: {_GRID_AXIS[name]}"
            ),
        )
        sp.add_argument(
            "--echo",
            action=argparse.BooleanOptionalAction,
            default=None,
            help="override the protocol's echo flag",
        )
        sp.add_argument(
            "--theta",
            type=float,
            default=None,
            help="override the tipping angle (radians)",
        )
        sp.add_argument(
            "--normalization",
            choices=("per-spin", "total"),
            default="per-spin",
            help="coherence normalization where a finite system is summed (fig4)",
        )
    return parser


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    proto = cfg.protocol
    theta = proto.theta if args.theta is None else args.theta
    echo = proto.echo if args.echo is None else args.echo
    if theta == proto.theta and echo == proto.echo:
        return cfg
    new_proto = RamseyProtocol(theta, echo, proto.gamma, proto.gamma_d)
    resolved = dict(cfg.resolved)
    resolved["protocol"] = dict(resolved.get("protocol", {}))
    resolved["protocol"]["theta"] = theta
    resolved["protocol"]["echo"] = echo
    return dataclasses.replace(cfg, protocol=new_proto, resolved=resolved)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        grid = None if args.grid is None else parse_grid(args.grid)
        cfg = None
        if args.config is not None:
            cfg = _apply_overrides(load_config(args.config), args)
        elif args.command != "validate":
            raise ConfigError(f"{args.command} requires --config")
        if args.command == "fig2":
            manifest = run_fig2(cfg, args.out, grid)
        elif args.command == "fig3":
            manifest = run_fig3(cfg, args.out, grid)
        elif args.command == "fig4":
            manifest = run_fig4(cfg, args.out, grid, args.normalization)
        elif args.command == "fig5":
            manifest = run_fig5(cfg, args.out, grid)
        elif args.command == "scan":
            manifest = run_scan(cfg, args.out, grid)
        else:
            manifest = run_validate(cfg, args.out, seed=args.seed)
    except (ConfigError, ParameterError, UnsupportedRegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CrossingNotFoundError, CapacityError, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for name in manifest["files"]:
        print(f"wrote {manifest['out_dir']}/{name}")
    if args.command == "validate" and not manifest["all_passed"]:
        print("validation FAILED; see validation_report.json", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
