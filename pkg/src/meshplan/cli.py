"""Command-line entry point: ``meshplan {synth,budget,plan,report}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .clustering import EXACT, GREEDY
from .errors import ConfigError, PlanError
from .ingest import write_matrix_csv, write_roster
from .link_budget import LinkBudgetParams, compute_pl_max
from .report import PlanConfig, load_config, merge, rerender, run_plan
from .synth import SynthConfig, synth_scenario

logger = logging.getLogger("meshplan")

_BUDGET_FLAGS = (
    ("--tx-power", "tx_power_dbm", "transmit power, dBm"),
    ("--tx-gain", "tx_gain_dbi", "transmit antenna gain, dBi"),
    ("--rx-gain", "rx_gain_dbi", "receive antenna gain, dBi"),
    ("--losses", "system_losses_db", "total system losses, dB (negative)"),
    ("--sensitivity", "rx_sensitivity_dbm", "receiver sensitivity, dBm"),
    ("--margin", "link_margin_db", "link margin, dB"),
)


def _add_budget_flags(p: argparse.ArgumentParser, with_defaults: bool) -> None:
    defaults = LinkBudgetParams()
    for flag, dest, help_ in _BUDGET_FLAGS:
        default = getattr(defaults, dest) if with_defaults else None
        p.add_argument(flag, dest=dest, type=float, default=default,
                       help=f"{help_} (default: {getattr(defaults, dest)})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meshplan", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic roster and directed path-loss matrix")
    d = SynthConfig()
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--nodes", type=int, default=d.n_nodes)
    p.add_argument("--width", type=float, default=d.width_m, help="region width, m")
    p.add_argument("--height", type=float, default=d.height_m, help="region height, m")
    p.add_argument("--frequency", type=float, default=d.frequency_hz, help="Hz")
    p.add_argument("--exponent", type=float, default=d.path_loss_exponent)
    p.add_argument("--foliage-db-per-m", type=float, default=d.foliage_db_per_m)
    p.add_argument("--foliage-fraction", type=float, default=d.foliage_fraction)
    p.add_argument("--sigma", type=float, default=d.shadowing_sigma_db, help="shadowing std-dev, dB")
    p.add_argument("--seed", type=int, default=d.seed)

    p = sub.add_parser("budget", help="print the maximum tolerable path loss")
    _add_budget_flags(p, with_defaults=True)

    p = sub.add_parser("plan", help="cluster nodes and select gateways")
    p.add_argument("--config", type=Path, help="INI plan file; flags override it")
    p.add_argument("--roster", type=Path)
    p.add_argument("--pathloss", type=Path)
    p.add_argument("--out", dest="output", type=Path)
    p.add_argument("--k", type=int)
    p.add_argument("--capacity", type=int)
    p.add_argument("--dim", type=int, help="embedding dimension (default: k)")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--assignment", choices=(EXACT, GREEDY))
    p.add_argument("--no-lower-bound", dest="lower_bound", action="store_const", const=False)
    p.add_argument("--sim-lo", type=float)
    p.add_argument("--sim-hi", type=float)
    p.add_argument("--pl-min", dest="pl_min_db", type=float)
    p.add_argument("--dump-eigenvalues", action="store_const", const=True,
                   help="also write eigenvalues.csv with the full Laplacian spectrum")
    _add_budget_flags(p, with_defaults=False)

    p = sub.add_parser("report", help="re-render heatmaps from a plan output directory")
    p.add_argument("directory", type=Path)
    return parser


def _synth(args) -> int:
    cfg = SynthConfig(n_nodes=args.nodes, width_m=args.width, height_m=args.height,
                      frequency_hz=args.frequency, path_loss_exponent=args.exponent,
                      foliage_db_per_m=args.foliage_db_per_m, foliage_fraction=args.foliage_fraction,
                      shadowing_sigma_db=args.sigma, seed=args.seed)
    roster, raw = synth_scenario(cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    write_roster(args.out / "roster.csv", roster)
    write_matrix_csv(args.out / "pathloss.csv", roster.ids, raw.values)
    logger.info("wrote %d nodes to %s", len(roster), args.out)
    return 0


def _budget(args) -> int:
    params = LinkBudgetParams(**{dest: getattr(args, dest) for _, dest, _ in _BUDGET_FLAGS})
    print(f"{compute_pl_max(params).pl_max_db:.2f}")
    return 0


def _plan(args) -> int:
    cfg = load_config(args.config) if args.config else PlanConfig()
    overrides = {name: getattr(args, name) for name in (
        "roster", "pathloss", "output", "k", "capacity", "dim", "seed", "restarts", "max_iters",
        "assignment", "lower_bound", "sim_lo", "sim_hi", "pl_min_db", "dump_eigenvalues")}
    overrides.update({dest: getattr(args, dest) for _, dest, _ in _BUDGET_FLAGS})
    try:
        cfg = merge(cfg, overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    report = run_plan(cfg)
    s = report.summary
    print(f"{s['n']} nodes -> {s['k']} clusters, sizes {s['cluster_sizes']}, {s['gateways']} gateways; "
          f"wrote {len(report.files)} files to {cfg.output}")
    return 0


def _report(args) -> int:
    for name in rerender(args.directory):
        print(args.directory / name)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"synth": _synth, "budget": _budget, "plan": _plan, "report": _report}[args.command]
    try:
        return handler(args)
    except PlanError as exc:
        print(f"meshplan: {exc.stage} error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"meshplan: ingest error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
