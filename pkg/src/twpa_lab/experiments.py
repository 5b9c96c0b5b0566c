"""Sweep rows, figure presets and the oracle verification suite.

Every row function is pure, so a sweep is a map over its grid. :func:`run_grid`
spreads the map over a thread pool and returns rows in grid order, which
keeps the output independent of the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import distributed as dist
from . import lumped
from .config import ExperimentConfig, Mode
from .errors import DomainError
from .gaussian import log_negativity, purity, th_tmss_from_moments
from .lumped import LumpedConfig
from .oracle import ChainSpec, Stepping, moment_distance, propagate_extrapolated
from .qubits import bath_from_lumped, concurrence, liouvillian, steady_state

THREADS_ENV = "TWPA_LAB_THREADS"


@dataclass
class Table:
    columns: list[str]
    rows: list[tuple]
    meta: dict = field(default_factory=dict)


def resolve_threads(requested: int | None) -> int:
    """Worker count from the flag, then the environment, else 1. 0 means all cores."""
    if requested is None:
        env = os.environ.get(THREADS_ENV)
        if env is None or env.strip() == "":
            return 1
        try:
            requested = int(env)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    if requested < 0:
        raise DomainError(f"thread count must be >= 0, got {requested}")
    return requested or (os.cpu_count() or 1)


def run_grid(fn: Callable, grid: Sequence, threads: int = 1) -> list:
    if threads <= 1 or len(grid) < 2:
        return [fn(x) for x in grid]
    with ThreadPoolExecutor(max_workers=min(threads, len(grid))) as pool:
        return list(pool.map(fn, grid))


def db(g: float) -> float:
    return 10.0 * math.log10(g)


# --- lumped -----------------------------------------------------------------

LUMPED_COLUMNS = [
    "eta_signal", "eta_idler", "gain_dB", "n_signal", "n_idler", "anomalous",
    "nbar_signal", "nbar_idler", "R", "E_N", "purity",
    "S_sym", "S_asym_quad", "S_corrected",
]


def lumped_row(r: float, eps_bar: float, delta: float) -> tuple:
    c = LumpedConfig.from_asymmetry(r, eps_bar, delta)
    m = lumped.output_moments(c)
    p = th_tmss_from_moments(m)
    oriented, _ = lumped.orient(c)
    s_cor = lumped.corrected_squeezing(c).s_minus if oriented.eta_idler > 0 else 0.5
    return (
        c.eta_signal, c.eta_idler, db(c.ideal_gain), m.n_signal, m.n_idler, m.anomalous.real,
        p.nbar_signal, p.nbar_idler, p.squeeze, log_negativity(p), purity(p),
        lumped.asymmetric_squeezing(c), lumped.asymmetric_quadrature_squeezing(c), s_cor,
    )


# --- distributed ------------------------------------------------------------

DISTRIBUTED_COLUMNS = [
    "ideal_gain_dB", "gain", "gain_dB", "n_signal", "n_idler", "anomalous_re", "anomalous_im",
    "added_noise", "S_minus", "E_N", "purity",
]


def distributed_row(c: dist.DistributedConfig) -> tuple:
    m = dist.output_moments(c)
    g = dist.gain(c)
    added = (m.n_signal + 0.5) / g - 0.5 if g > 1.0 else math.nan
    p = th_tmss_from_moments(m)
    return (
        db(c.ideal_gain), g, db(g), m.n_signal, m.n_idler, m.anomalous.real, m.anomalous.imag,
        added, dist.squeezing(c), log_negativity(p), purity(p),
    )


# --- qubits -----------------------------------------------------------------

QUBIT_COLUMNS = ["concurrence", "purity"]


def qubit_row(r: float, eps_bar: float, delta: float, gamma: float = 1.0) -> tuple:
    c = LumpedConfig.from_asymmetry(r, eps_bar, delta)
    state = steady_state(liouvillian(bath_from_lumped(c, gamma, gamma)))
    return concurrence(state), state.purity()


# --- presets ----------------------------------------------------------------

FIG2_R = 3.0
FIG34_R = 2.65
FIG7 = {"nu": 1.0, "v": 1.0, "kappa_bar": 0.2, "eps": 0.1}
#: delta = 1 needs eps_bar <= 1/2 for a non-negative signal transmission
EPS_BAR_MAX = 0.5


def _fig2(threads: int) -> Table:
    eps = np.logspace(-5, math.log10(EPS_BAR_MAX), 200)

    def row(e):
        sym = lumped.th_tmss(LumpedConfig.from_asymmetry(FIG2_R, e, 0.0))
        asym = lumped.th_tmss(LumpedConfig.from_asymmetry(FIG2_R, e, 1.0))
        return (e, sym.nbar_signal + sym.nbar_idler, asym.nbar_signal + asym.nbar_idler, sym.squeeze, asym.squeeze)

    meta = {"r": FIG2_R, "crossover_eps_bar": math.exp(-2.0 * FIG2_R), "eps_bar_max": EPS_BAR_MAX}
    return Table(["eps_bar", "nsum_sym", "nsum_asym", "R_sym", "R_asym"], run_grid(row, eps, threads), meta)


def _fig3(threads: int) -> Table:
    eps = np.linspace(0.0, EPS_BAR_MAX, 201)

    def row(e):
        sym = LumpedConfig.from_asymmetry(FIG34_R, e, 0.0)
        asym = LumpedConfig.from_asymmetry(FIG34_R, e, 1.0)
        s_cor = lumped.corrected_squeezing(asym).s_minus
        return (
            e, lumped.asymmetric_squeezing(sym), lumped.asymmetric_squeezing(asym), s_cor,
            lumped.asymmetric_quadrature_squeezing(asym),
        )

    meta = {"r": FIG34_R, "eps_bar_max": EPS_BAR_MAX}
    return Table(["eps_bar", "S_sym", "S_asym", "S_corrected", "S_asym_quad"], run_grid(row, eps, threads), meta)


def _fig4(threads: int) -> Table:
    eps = np.linspace(0.0, EPS_BAR_MAX, 201)

    def row(e):
        out = [e]
        for delta in (0.0, 1.0):
            p = lumped.th_tmss(LumpedConfig.from_asymmetry(FIG34_R, e, delta))
            out += [log_negativity(p), purity(p)]
        return tuple(out)

    meta = {"r": FIG34_R, "eps_bar_max": EPS_BAR_MAX}
    return Table(["eps_bar", "EN_sym", "purity_sym", "EN_asym", "purity_asym"], run_grid(row, eps, threads), meta)


def _qubit_r_grid() -> np.ndarray:
    return np.linspace(0.05, 4.0, 100)


def _fig5(threads: int) -> Table:
    def row(r):
        return (r, qubit_row(r, 0.0, 0.0)[0], *qubit_row(r, 0.05, 0.0))

    meta = {"eps_bar": 0.05, "delta": 0.0}
    return Table(["r", "C_lossless", "C", "purity"], run_grid(row, _qubit_r_grid(), threads), meta)


def _fig6(threads: int) -> Table:
    def row(r):
        return (r, qubit_row(r, 0.05, 0.0)[0], qubit_row(r, 0.05, 1.0)[0])

    meta = {"eps_bar": 0.05}
    return Table(["r", "C_sym", "C_asym"], run_grid(row, _qubit_r_grid(), threads), meta)


def _fig7(threads: int) -> Table:
    p = FIG7
    gains_db = np.linspace(0.5, 40.0, 200)

    def row(gdb):
        length = p["v"] / p["nu"] * math.acosh(math.sqrt(10.0 ** (gdb / 10.0)))
        sym = dist.DistributedConfig.from_average(p["nu"], p["v"], length, p["kappa_bar"])
        asym = dist.DistributedConfig.from_average(p["nu"], p["v"], length, p["kappa_bar"], p["eps"])
        return (
            gdb, dist.squeezing(sym), dist.squeezing(asym), 0.5 * math.exp(-2.0 * length * p["nu"] / p["v"]),
            dist.distributed_correction(asym).corrected_s,
        )

    meta = dict(p)
    return Table(["ideal_gain_dB", "S_sym", "S_asym", "S_ideal", "S_corrected"], run_grid(row, gains_db, threads), meta)


PRESET_BUILDERS: dict[str, Callable[[int], Table]] = {
    "fig2": _fig2, "fig3": _fig3, "fig4": _fig4, "fig5": _fig5, "fig6": _fig6, "fig7": _fig7,
}


def run_preset(name: str, threads: int = 1) -> Table:
    table = PRESET_BUILDERS[name](threads)
    table.meta = {"preset": name, **table.meta}
    return table


# --- oracle suite -----------------------------------------------------------


def oracle_suite_configs(count: int = 50, seed: int = 20240101) -> list[dist.DistributedConfig]:
    """Random constant-loss configs with ``nu = v = 1``."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        ks, ki, dk = rng.uniform(0.0, 0.5, size=3)
        length = rng.uniform(0.1, 5.0)
        out.append(dist.DistributedConfig(1.0, 1.0, float(length), float(ks), float(ki), float(dk)))
    return out


ORACLE_COLUMNS = ["length", "kappa_signal", "kappa_idler", "delta_k", "deviation"]


def oracle_deviation(c: dist.DistributedConfig, segments: int = 2**16) -> float:
    ref = propagate_extrapolated(ChainSpec(c, segments, Stepping.STRANG))
    return moment_distance(ref, dist.output_moments(c))


def verify_oracle(count: int = 50, seed: int = 20240101, segments: int = 2**16, threads: int = 1) -> Table:
    configs = oracle_suite_configs(count, seed)

    def row(c):
        return (c.length, c.kappa_signal, c.kappa_idler, c.delta_k, oracle_deviation(c, segments))

    rows = run_grid(row, configs, threads)
    return Table(ORACLE_COLUMNS, rows, {"max_deviation": max(r[-1] for r in rows)})


# --- dispatch ---------------------------------------------------------------


def _sweep_table(cfg: ExperimentConfig, threads: int) -> Table:
    sweep = cfg.sweep
    values = sweep.values()
    base = cfg.params
    if cfg.mode is Mode.LUMPED_SWEEP:
        def row(x):
            p = {**base, sweep.name: x}
            return (x, *lumped_row(p["r"], p["eps_bar"], p["delta"]))
        columns = LUMPED_COLUMNS
        # validate the entire grid up front so errors surface before any work
        for x in values:
            p = {**base, sweep.name: x}
            LumpedConfig.from_asymmetry(p["r"], p["eps_bar"], p["delta"])
    elif cfg.mode is Mode.DISTRIBUTED_SWEEP:
        def make(x):
            p = {**base, sweep.name: x}
            return dist.DistributedConfig.from_average(p["nu"], p["v"], p["length"], p["kappa_bar"], p["eps"], p["delta_k"])
        configs = [make(x) for x in values]

        def row(i):
            return (values[i], *distributed_row(configs[i]))
        values = range(len(configs))
        columns = DISTRIBUTED_COLUMNS
    else:
        def row(x):
            p = {**base, sweep.name: x}
            if p["gamma"] <= 0:
                raise DomainError("gamma must be > 0")
            return (x, *qubit_row(p["r"], p["eps_bar"], p["delta"], p["gamma"]))
        columns = QUBIT_COLUMNS
        for x in values:
            p = {**base, sweep.name: x}
            LumpedConfig.from_asymmetry(p["r"], p["eps_bar"], p["delta"])
    rows = run_grid(row, list(values), threads)
    return Table([sweep.name, *columns], rows, {"mode": cfg.mode.value, **{k: v for k, v in base.items()}})


def run(cfg: ExperimentConfig, threads: int = 1) -> Table:
    if cfg.mode is Mode.PRESET:
        return run_preset(cfg.preset, threads)
    if cfg.mode is Mode.VERIFY_ORACLE:
        p = cfg.params
        for key in ("count", "segments"):
            if p[key] != int(p[key]) or p[key] < 1:
                raise DomainError(f"{key} must be a positive integer")
        return verify_oracle(int(p["count"]), int(p["seed"]), int(p["segments"]), threads)
    return _sweep_table(cfg, threads)
