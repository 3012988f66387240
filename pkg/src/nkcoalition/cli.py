"""Command-line sweep driver.

``nkcoalition sweep`` expands a scenario grid (the embedded default is the
full 45-scenario experiment at R=1500, T=200), runs every scenario, and writes
``summary.csv``, one ``series_<scenario_id>.csv`` per scenario, optional raw
and auction dumps, and ``manifest.txt`` into the output directory. Outputs are
byte-stable: fixed column order, LF line endings, shortest-round-trip float
formatting, and per-round seeding that makes results independent of the
parallelism degree.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from . import __version__, kernels
from .engine import DEFAULT_MASTER_SEED, ScenarioConfig, run_scenario
from .landscape import CANONICAL_PAIRS, format_bits, bits_from_code

DEFAULT_CELLS = [[k, structure] for structure, k in CANONICAL_PAIRS]
DEFAULT_CELLS.sort(key=lambda c: (c[0], c[1]))  # K3 conc, K3 scat, K5 conc, K5 scat, K11 full


@dataclass
class SweepSpec:
    cells: list = field(default_factory=lambda: [list(c) for c in DEFAULT_CELLS])
    p_values: list = field(default_factory=lambda: [0.0, 0.2, 0.5])
    tau_values: list = field(default_factory=lambda: [0, 1, 10])
    rounds: int = 1500
    t_max: int = 200
    pool_size: int = 18
    alpha: float = 0.5
    beta: float = 0.5
    master_seed: int = DEFAULT_MASTER_SEED
    adapt_scope: str = "members"

    def scenario_configs(self) -> list[ScenarioConfig]:
        configs = []
        for k, structure in self.cells:
            for p in self.p_values:
                for tau in self.tau_values:
                    configs.append(
                        ScenarioConfig(
                            k=int(k),
                            structure=str(structure),
                            p=float(p),
                            tau=int(tau),
                            rounds=self.rounds,
                            master_seed=self.master_seed,
                            t_max=self.t_max,
                            pool_size=self.pool_size,
                            alpha=self.alpha,
                            beta=self.beta,
                            adapt_scope=self.adapt_scope,
                        )
                    )
        return configs

    def config_hash(self) -> str:
        canonical = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()


class ConfigFileError(ValueError):
    pass


_SCALAR_FIELDS = {
    "rounds": int,
    "t_max": int,
    "pool_size": int,
    "alpha": float,
    "beta": float,
    "master_seed": int,
    "adapt_scope": str,
}
_LIST_FIELDS = ("cells", "p_values", "tau_values")


def load_sweep_spec(path: Path) -> SweepSpec:
    """Parse a YAML sweep config; unknown or ill-typed fields are an error."""
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigFileError(f"{path}: invalid YAML: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigFileError(f"{path}: top level must be a mapping")

    spec = SweepSpec()
    for key, value in raw.items():
        if key in _SCALAR_FIELDS:
            try:
                setattr(spec, key, _SCALAR_FIELDS[key](value))
            except (TypeError, ValueError) as exc:
                raise ConfigFileError(f"{path}: field '{key}': {exc}") from exc
        elif key == "cells":
            try:
                spec.cells = [[int(k), str(structure)] for k, structure in value]
            except (TypeError, ValueError) as exc:
                raise ConfigFileError(
                    f"{path}: field 'cells' must be a list of [K, structure] pairs: {exc}"
                ) from exc
        elif key == "p_values":
            spec.p_values = [float(v) for v in value]
        elif key == "tau_values":
            spec.tau_values = [int(v) for v in value]
        else:
            raise ConfigFileError(f"{path}: unknown field '{key}'")
    for name in _LIST_FIELDS:
        if not getattr(spec, name):
            raise ConfigFileError(f"{path}: field '{name}' must not be empty")
    return spec


def default_config_yaml() -> str:
    spec = SweepSpec()
    return yaml.safe_dump(asdict(spec), sort_keys=False, default_flow_style=None)


def spec_from_manifest(path: Path) -> SweepSpec:
    """Rebuild the exact sweep spec recorded in a manifest file."""
    text = path.read_text()
    marker = "resolved_config:\n"
    idx = text.index(marker)
    block = "\n".join(
        line[2:] for line in text[idx + len(marker):].splitlines() if line.startswith("  ")
    )
    data = yaml.safe_load(block)
    return SweepSpec(**data)


# ---------------------------------------------------------------------------
# sweep execution and output writing
# ---------------------------------------------------------------------------

def _fmt(value: float) -> str:
    return repr(float(value))


def _run_one(args) -> tuple:
    config, raw_dump, auction_log = args
    result = run_scenario(config, workers=None, record_auctions=auction_log)
    raw_rows = None
    if raw_dump:
        raw_rows = []
        for rr in result.rounds:
            for i in range(rr.t_max):
                raw_rows.append(
                    (
                        rr.round_index,
                        i + 1,
                        format_bits(bits_from_code(int(rr.strategy_codes[i]), config.n)),
                        _fmt(rr.raw[i]),
                        _fmt(rr.normalized[i]),
                        int(rr.member_ids[i, 0]),
                        int(rr.member_ids[i, 1]),
                        int(rr.member_ids[i, 2]),
                    )
                )
    auction_rows = None
    if auction_log:
        auction_rows = []
        for rr in result.rounds:
            for (rnd, t, area, winner, bid, price) in rr.auction_events:
                auction_rows.append((rnd, t, area, winner, _fmt(bid), _fmt(price)))
    return config.scenario_id, result.distance, result.series, raw_rows, auction_rows


def run_sweep(
    spec: SweepSpec,
    outdir: Path,
    workers: int = 1,
    raw_dump: bool = False,
    auction_log: bool = False,
    log=print,
) -> Path:
    """Run every scenario in the grid and write all output files.

    Returns the path of the summary CSV.
    """
    configs = spec.scenario_configs()
    outdir.mkdir(parents=True, exist_ok=True)

    jobs = [(cfg, raw_dump, auction_log) for cfg in configs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=1))
    else:
        results = [_run_one(job) for job in jobs]

    summary_path = outdir / "summary.csv"
    with open(summary_path, "w", newline="") as f:
        f.write("scenario_id,K,structure,p,tau,D\n")
        for cfg, (scenario_id, distance, _, _, _) in zip(configs, results):
            f.write(
                f"{scenario_id},{cfg.k},{cfg.structure},{cfg.p:g},{cfg.tau},{_fmt(distance)}\n"
            )

    for cfg, (scenario_id, _, series, raw_rows, auction_rows) in zip(configs, results):
        with open(outdir / f"series_{scenario_id}.csv", "w", newline="") as f:
            f.write("t,c_norm\n")
            for t, value in enumerate(series, start=1):
                f.write(f"{t},{_fmt(value)}\n")
        if raw_rows is not None:
            with open(outdir / f"raw_{scenario_id}.csv", "w", newline="") as f:
                f.write(
                    "round,t,strategy,raw_performance,normalized_performance,"
                    "member_area0,member_area1,member_area2\n"
                )
                for row in raw_rows:
                    f.write(",".join(str(v) for v in row) + "\n")
        if auction_rows is not None:
            with open(outdir / f"auction_log_{scenario_id}.csv", "w", newline="") as f:
                f.write("round,t,area,winner_id,winning_bid,clearing_price\n")
                for row in auction_rows:
                    f.write(",".join(str(v) for v in row) + "\n")

    with open(outdir / "manifest.txt", "w", newline="") as f:
        f.write(f"artifact_version: {__version__}\n")
        f.write(f"config_sha256: {spec.config_hash()}\n")
        f.write(f"scenario_count: {len(configs)}\n")
        f.write(f"kernel_backend: {kernels.backend_name()}\n")
        f.write("resolved_config:\n")
        for line in yaml.safe_dump(asdict(spec), sort_keys=True, default_flow_style=None).splitlines():
            f.write(f"  {line}\n")

    log(f"wrote {len(configs)} scenario summaries to {summary_path}")
    return summary_path


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nkcoalition",
        description="Coalition-formation simulations on NK performance landscapes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a scenario sweep and write CSV outputs")
    sweep.add_argument("--config", type=Path, default=None, help="YAML sweep config (default: embedded paper grid)")
    sweep.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    sweep.add_argument("--seed", type=int, default=None, help="master seed override")
    sweep.add_argument("--rounds", type=int, default=None, help="rounds-per-scenario override")
    sweep.add_argument("--t-max", type=int, default=None, help="time-horizon override")
    sweep.add_argument("--workers", type=int, default=1, help="scenario-level process parallelism")
    sweep.add_argument("--raw-dump", action="store_true", help="write per-step raw_<id>.csv files")
    sweep.add_argument("--auction-log", action="store_true", help="write auction_log_<id>.csv files")

    sub.add_parser("print-config", help="print the embedded default sweep config as YAML")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "print-config":
        sys.stdout.write(default_config_yaml())
        return 0

    try:
        spec = load_sweep_spec(args.config) if args.config else SweepSpec()
        if args.seed is not None:
            spec.master_seed = args.seed
        if args.rounds is not None:
            spec.rounds = args.rounds
        if args.t_max is not None:
            spec.t_max = args.t_max
        spec.scenario_configs()  # validates the full grid before any work
    except (ConfigFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        run_sweep(
            spec,
            args.out,
            workers=max(1, args.workers),
            raw_dump=args.raw_dump,
            auction_log=args.auction_log,
        )
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
