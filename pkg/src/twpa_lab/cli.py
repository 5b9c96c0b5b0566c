"""Command-line entry point.

Exit codes: 0 success, 2 config error, 3 model-domain violation, 4 oracle
mismatch beyond tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import config as cfgmod
from .config import ConfigError, ExperimentConfig, Mode
from .errors import DomainError
from .experiments import Table, resolve_threads, run

log = logging.getLogger("twpa_lab")

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_ORACLE = 0, 2, 3, 4


def _cell(x) -> str:
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def format_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(float(x)) for x in row])
    return buf.getvalue()


def write_outputs(table: Table, out: str | None) -> None:
    text = format_csv(table)
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    if table.meta:
        meta_path = path.with_name(path.name + ".meta.json")
        meta_path.write_text(json.dumps(table.meta, indent=2, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twpa-lab", description="Lossy TWPA Gaussian-channel experiments.")
    p.add_argument("--config", metavar="PATH", help="experiment config file")
    p.add_argument("--preset", choices=cfgmod.PRESETS, help="figure preset (overrides the config's preset)")
    p.add_argument("--out", metavar="PATH", help="CSV output path ('-' for stdout)")
    p.add_argument("--threads", type=int, metavar="N", help="worker threads, 0 = all cores (env TWPA_LAB_THREADS)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is None:
        if args.preset is None:
            raise ConfigError("need --config or --preset")
        return ExperimentConfig(Mode.PRESET, args.preset)
    cfg = cfgmod.load(args.config)
    if args.preset is not None:
        cfg = ExperimentConfig(Mode.PRESET, args.preset, cfg.params, None, cfg.out)
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = resolve_config(args)
        threads = resolve_threads(args.threads)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = run(cfg, threads)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    write_outputs(table, args.out if args.out is not None else cfg.out)
    if cfg.mode is Mode.VERIFY_ORACLE:
        worst = table.meta["max_deviation"]
        tol = cfg.params["tolerance"]
        print(f"oracle max deviation {worst:.3e} (tolerance {tol:.1e})", file=sys.stderr)
        if not worst <= tol:
            return EXIT_ORACLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
