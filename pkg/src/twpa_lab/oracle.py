"""Brute-force reference for the distributed amplifier.

The device is cut into ``N`` segments. Each one is an exact two-mode squeezer
of strength ``nu dx / v`` whose phase follows the pump, ``delta_k x``,
evaluated at the segment midpoint, together with beamsplitter loss of
transmission ``exp(-kappa(x) dx / v)`` per mode. ``first-order`` stepping
applies the squeezer and then the full loss; ``strang`` splits the loss into
two halves around the squeezer.

Every segment is an affine map on the covariance matrix,
``sigma -> A sigma A^T + B``. Maps are composed pairwise in vectorised
batches, which gives the same chain as stepping one segment at a time.
:func:`trajectory` does step one segment at a time, for inspection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distributed import DistributedConfig, profile_value
from .errors import DomainError
from .gaussian import Moments, covariance_from_moments, moments_from_covariance

DEFAULT_SEGMENTS = 2**14
MAX_SEGMENTS = 2**20
_CHUNK = 2**14


class Stepping(str, Enum):
    FIRST_ORDER = "first-order"
    STRANG = "strang"


@dataclass(frozen=True)
class ChainSpec:
    config: DistributedConfig
    segments: int = DEFAULT_SEGMENTS
    stepping: Stepping = Stepping.STRANG

    def __post_init__(self):
        if self.segments < 1:
            raise DomainError(f"segments must be >= 1, got {self.segments}")
        if not self.config.length > 0:
            raise DomainError("chain needs a positive length")
        object.__setattr__(self, "stepping", Stepping(self.stepping))

    @property
    def dx(self) -> float:
        return self.config.length / self.segments


def _squeezers(g: float, phases: np.ndarray) -> np.ndarray:
    c, s = math.cosh(g), math.sinh(g)
    cp, sp = np.cos(phases), np.sin(phases)
    out = np.zeros((phases.size, 4, 4))
    for i in range(4):
        out[:, i, i] = c
    # off-diagonal blocks s * [[cos, sin], [sin, -cos]]
    for r0, c0 in ((0, 2), (2, 0)):
        out[:, r0, c0] = s * cp
        out[:, r0, c0 + 1] = s * sp
        out[:, r0 + 1, c0] = s * sp
        out[:, r0 + 1, c0 + 1] = -s * cp
    return out


def _transmissions(c: DistributedConfig, xs: np.ndarray, dx: float) -> np.ndarray:
    """Amplitude transmissions, shape (n, 4), ordered (X_S, P_S, X_I, P_I)."""
    k_s = np.array([profile_value(c.kappa_signal, x) for x in xs])
    k_i = np.array([profile_value(c.kappa_idler, x) for x in xs])
    t_s = np.exp(-0.5 * k_s * dx / c.v)
    t_i = np.exp(-0.5 * k_i * dx / c.v)
    return np.stack([t_s, t_s, t_i, t_i], axis=1)


def segment_maps(spec: ChainSpec, start: int = 0, stop: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Affine maps ``(A, B)`` of segments ``start .. stop - 1``."""
    c, dx = spec.config, spec.dx
    stop = spec.segments if stop is None else stop
    xs = (np.arange(start, stop) + 0.5) * dx
    sq = _squeezers(c.nu * dx / c.v, c.delta_k * xs)
    if spec.stepping is Stepping.FIRST_ORDER:
        t = _transmissions(c, xs, dx)
        a = t[:, :, None] * sq
        b = np.zeros_like(a)
        idx = np.arange(4)
        b[:, idx, idx] = 1.0 - t * t
    else:
        t = _transmissions(c, xs, 0.5 * dx)
        ts = t[:, :, None] * sq
        a = ts * t[:, None, :]
        d = 1.0 - t * t
        b = np.einsum("nij,nj,nkj->nik", ts, d, ts)
        idx = np.arange(4)
        b[:, idx, idx] += d
    return a, b


def compose(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Collapse a batch of maps, applied in index order, into one."""
    while a.shape[0] > 1:
        odd = a.shape[0] % 2
        if odd:
            tail_a, tail_b = a[-1:], b[-1:]
            a, b = a[:-1], b[:-1]
        a1, b1, a2, b2 = a[0::2], b[0::2], a[1::2], b[1::2]
        a_new = a2 @ a1
        b_new = a2 @ b1 @ np.swapaxes(a2, 1, 2) + b2
        if odd:
            a_new = np.concatenate([a_new, tail_a])
            b_new = np.concatenate([b_new, tail_b])
        a, b = a_new, b_new
    return a[0], b[0]


def _to_corotating(m: Moments, c: DistributedConfig) -> Moments:
    return Moments(m.n_signal, m.n_idler, m.anomalous * complex(math.cos(c.delta_k * c.length), -math.sin(c.delta_k * c.length)))


def propagate(spec: ChainSpec) -> Moments:
    """Moments after the chain, starting from vacuum.

    The anomalous moment is rotated into the co-rotating frame used by
    :func:`twpa_lab.distributed.output_moments`.
    """
    sigma = np.eye(4)
    for start in range(0, spec.segments, _CHUNK):
        a, b = compose(*segment_maps(spec, start, min(start + _CHUNK, spec.segments)))
        sigma = a @ sigma @ a.T + b
    return _to_corotating(moments_from_covariance(sigma), spec.config)


def trajectory(spec: ChainSpec) -> np.ndarray:
    """Covariance after every segment, shape ``(N + 1, 4, 4)``, lab frame."""
    a, b = segment_maps(spec)
    out = np.empty((spec.segments + 1, 4, 4))
    out[0] = np.eye(4)
    for j in range(spec.segments):
        out[j + 1] = a[j] @ out[j] @ a[j].T + b[j]
    return out


def propagate_extrapolated(spec: ChainSpec) -> Moments:
    """Richardson combination of ``N`` and ``2N`` segments.

    Cancels the leading ``dx**p`` error term (``p = 2`` for Strang, 1 for
    first-order stepping).
    """
    p = 2 if spec.stepping is Stepping.STRANG else 1
    coarse = propagate(spec)
    fine = propagate(ChainSpec(spec.config, 2 * spec.segments, spec.stepping))
    w = 2.0**p
    return Moments(
        (w * fine.n_signal - coarse.n_signal) / (w - 1.0),
        (w * fine.n_idler - coarse.n_idler) / (w - 1.0),
        (w * fine.anomalous - coarse.anomalous) / (w - 1.0),
    )


def propagate_converged(
    config: DistributedConfig,
    stepping: Stepping | str = Stepping.STRANG,
    segments: int = DEFAULT_SEGMENTS,
    tol: float = 1e-8,
    max_segments: int = MAX_SEGMENTS,
) -> tuple[Moments, int]:
    """Double ``segments`` until successive results differ by less than ``tol``.

    Returns the finest result and the segment count used. Stops at
    ``max_segments`` regardless.
    """
    prev = propagate(ChainSpec(config, segments, stepping))
    while segments < max_segments:
        segments *= 2
        cur = propagate(ChainSpec(config, segments, stepping))
        if moment_distance(prev, cur) < tol:
            return cur, segments
        prev = cur
    return prev, segments


def moment_distance(a: Moments, b: Moments) -> float:
    """Largest absolute difference over (N_S, N_I, Re M, Im M)."""
    d = np.array(
        [
            a.n_signal - b.n_signal,
            a.n_idler - b.n_idler,
            a.anomalous.real - b.anomalous.real,
            a.anomalous.imag - b.anomalous.imag,
        ]
    )
    return float(np.abs(d).max())


def richardson_errors(spec: ChainSpec) -> tuple[float, float]:
    """Successive differences between ``N``, ``2N`` and ``4N`` segments."""
    runs = [propagate(ChainSpec(spec.config, spec.segments * k, spec.stepping)) for k in (1, 2, 4)]
    return moment_distance(runs[0], runs[1]), moment_distance(runs[1], runs[2])


def convergence_order(spec: ChainSpec) -> float:
    """Empirical order ``log2(e_N / e_2N)``.

    Returns ``inf`` when the chain is already exact to rounding (lossless and
    phase matched), where the ratio is meaningless.
    """
    if spec.segments < 4:
        raise DomainError("convergence_order needs at least 4 segments")
    e1, e2 = richardson_errors(spec)
    scale = max(1.0, abs(covariance_from_moments(propagate(spec))).max())
    if e1 <= 1e-13 * scale:
        return math.inf
    return math.log2(e1 / e2)
