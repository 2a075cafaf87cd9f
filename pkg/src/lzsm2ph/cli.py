"""Command-line front end.

Precedence of settings: command-line flags > config file > built-in defaults.
Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import RUNS, load_config
from .errors import ConfigError, DomainError, IntegrationError
from .presets import run_preset

log = logging.getLogger("lzsm2ph")

SUBCOMMAND_PRESETS = {
    "simulate": "simulate",
    "eigen": "fig1-eigen",
    "majorana": "fig2-majorana",
    "sweep": "fig3-map",
    "lzsm-fit": "fig4-scaling",
}


def _common(p):
    p.add_argument("--config", help="INI run configuration, or a manifest .json to re-run")
    p.add_argument("--out-dir")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--engine", choices=["schrodinger", "lindblad", "effective"])
    p.add_argument("--tol", type=float)
    p.add_argument("--threads", type=int)
    p.add_argument("--convention", choices=["eq8", "eq9"])
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lzsm2ph", description="Two-photon LZSM transfer simulations")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("simulate", "single trajectory with the selected engine"),
                        ("eigen", "instantaneous spectrum (fig1-eigen)"),
                        ("majorana", "Majorana stars along the trajectory (fig2-majorana)"),
                        ("sweep", "amplitude x offset transfer map (fig3-map)"),
                        ("lzsm-fit", "ln p_g vs Omega^4 fits (fig4-scaling)")):
        _common(sub.add_parser(name, help=help_))
    p = sub.add_parser("preset", help="reproduce one figure's data")
    p.add_argument("name", nargs="?", choices=RUNS,
                   help="preset name; may be omitted when --config is a manifest")
    _common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        cfg = cfg.with_overrides(out_dir=args.out_dir, format=args.format, engine=args.engine,
                                 tol=args.tol, threads=args.threads, convention=args.convention)
        if args.command == "preset":
            name = args.name or cfg.preset
            if not name:
                raise ConfigError("no preset name given and none recorded in the config")
        else:
            name = SUBCOMMAND_PRESETS[args.command]
        out = run_preset(name, cfg)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    for f in out.files:
        log.info("wrote %s", cfg.out_dir / f)
    if out.failures:
        print(f"{len(out.failures)} cell(s) failed; see {name}.manifest.json", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
