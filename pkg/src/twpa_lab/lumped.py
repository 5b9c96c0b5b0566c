r"""Beamsplitter ("lumped element") loss after an ideal amplifier.

An ideal TWPA with squeeze parameter ``r`` is followed by independent
beamsplitters of power transmission ``eta_signal`` and ``eta_idler``, whose
dark ports carry vacuum. All functions are pointwise in frequency; a sweep over
frequency is a loop over :class:`LumpedConfig` values.

By convention the signal is the lossier channel (``eta_signal <= eta_idler``).
:func:`orient` swaps the roles when a config violates it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateChannel, DomainError, InvalidAsymmetry
from .gaussian import Moments, ThTmssParams, th_tmss_from_moments


@dataclass(frozen=True)
class LumpedConfig:
    r: float
    eta_signal: float
    eta_idler: float

    def __post_init__(self):
        if self.r < 0:
            raise DomainError(f"squeeze parameter r must be >= 0, got {self.r}")
        for name in ("eta_signal", "eta_idler"):
            eta = getattr(self, name)
            if not 0.0 <= eta <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {eta}")

    @classmethod
    def from_asymmetry(cls, r: float, eps_bar: float, delta: float) -> LumpedConfig:
        eta_s, eta_i = etas_from_asymmetry(LossAsymmetry(eps_bar, delta))
        return cls(r, eta_s, eta_i)

    @property
    def ideal_gain(self) -> float:
        return math.cosh(self.r) ** 2


@dataclass(frozen=True)
class LossAsymmetry:
    """Average loss ``eps_bar`` and relative asymmetry ``delta``."""

    eps_bar: float
    delta: float

    def __post_init__(self):
        if self.eps_bar < 0:
            raise InvalidAsymmetry(f"eps_bar must be >= 0, got {self.eps_bar}")
        if not 0.0 <= self.delta <= 1.0:
            raise InvalidAsymmetry(f"delta must lie in [0, 1], got {self.delta}")


class Correction(NamedTuple):
    eta_extra: float
    s_minus: float


def etas_from_asymmetry(a: LossAsymmetry) -> tuple[float, float]:
    eta_s = 1.0 - a.eps_bar * (1.0 + a.delta)
    eta_i = 1.0 - a.eps_bar * (1.0 - a.delta)
    if eta_s < 0:
        raise InvalidAsymmetry(
            f"eps_bar (1 + delta) = {a.eps_bar * (1 + a.delta):.6g} exceeds 1"
        )
    return eta_s, eta_i


def orient(c: LumpedConfig) -> tuple[LumpedConfig, bool]:
    """Return a config with the signal as the lossier channel, and whether the
    roles were swapped."""
    if c.eta_signal <= c.eta_idler:
        return c, False
    return LumpedConfig(c.r, c.eta_idler, c.eta_signal), True


def output_moments(c: LumpedConfig) -> Moments:
    sh2 = math.sinh(c.r) ** 2
    anomalous = math.sqrt(c.eta_signal * c.eta_idler) * 0.5 * math.sinh(2.0 * c.r)
    return Moments(c.eta_signal * sh2, c.eta_idler * sh2, complex(anomalous))


def th_tmss(c: LumpedConfig) -> ThTmssParams:
    return th_tmss_from_moments(output_moments(c))


def symmetric_squeezing(r: float, eta: float) -> float:
    """X_- variance for equal transmissions ``eta``."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    return 0.5 * (1.0 - eta + eta * math.exp(-2.0 * r))


def asymmetric_squeezing(c: LumpedConfig) -> float:
    """X_- variance for unequal transmissions.

    The last term is amplified noise, proportional to ``exp(2 r)``, that leaks
    into the symmetric quadrature whenever the transmissions differ.
    """
    es, ei = c.eta_signal, c.eta_idler
    rs, ri = math.sqrt(es), math.sqrt(ei)
    return 0.5 * (
        (1.0 - 0.5 * (es + ei))
        + 0.25 * math.exp(-2.0 * c.r) * (rs + ri) ** 2
        + 0.25 * math.exp(2.0 * c.r) * (rs - ri) ** 2
    )


def asymmetric_quadrature_angle(c: LumpedConfig) -> float:
    """Weighting angle with ``tan(theta) = sqrt(eta_signal / eta_idler)``."""
    return math.atan2(math.sqrt(c.eta_signal), math.sqrt(c.eta_idler))


def asymmetric_quadrature_squeezing(c: LumpedConfig) -> float:
    """Variance of the unequally weighted quadrature at
    :func:`asymmetric_quadrature_angle`."""
    es, ei = c.eta_signal, c.eta_idler
    if es + ei == 0:
        return 0.5
    return 0.5 * (1.0 - (2.0 * es * ei / (es + ei)) * (1.0 - math.exp(-2.0 * c.r)))


def corrected_squeezing(c: LumpedConfig) -> Correction:
    """Attenuate the less lossy channel so both transmissions match.

    ``eta_extra`` is the transmission of the added beamsplitter, placed on the
    idler (or on the signal if :func:`orient` had to swap roles).
    """
    oriented, _ = orient(c)
    if oriented.eta_idler == 0:
        raise DegenerateChannel("both channels fully lossy; no correction defined")
    eta_extra = oriented.eta_signal / oriented.eta_idler
    return Correction(eta_extra, symmetric_squeezing(c.r, oriented.eta_signal))


def attenuate(c: LumpedConfig, eta_signal_extra: float = 1.0, eta_idler_extra: float = 1.0) -> LumpedConfig:
    """Chain extra beamsplitters after the existing ones."""
    return LumpedConfig(c.r, c.eta_signal * eta_signal_extra, c.eta_idler * eta_idler_extra)
