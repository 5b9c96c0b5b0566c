"""Write every figure preset to ``<outdir>/<name>.csv``.

    python3 scripts/reproduce_figures.py results/ --threads 0
"""

import argparse
import time
from pathlib import Path

from twpa_lab.cli import write_outputs
from twpa_lab.config import PRESETS
from twpa_lab.experiments import resolve_threads, run_preset


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("outdir", type=Path)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--only", nargs="*", choices=PRESETS, default=list(PRESETS))
    args = p.parse_args()
    threads = resolve_threads(args.threads)
    for name in args.only:
        t0 = time.perf_counter()
        table = run_preset(name, threads)
        path = args.outdir / f"{name}.csv"
        write_outputs(table, str(path))
        print(f"{name}: {len(table.rows)} rows -> {path} ({time.perf_counter() - t0:.2f} s)")


if __name__ == "__main__":
    main()
