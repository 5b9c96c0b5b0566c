r"""Distributed loss and phase mismatch inside the amplifying section.

Signal and idler decay at rates ``kappa_signal`` and ``kappa_idler`` while they
propagate from ``x = 0`` to ``x = L``, and the pump phase winds as
``exp(i delta_k x)``. Moments are evaluated at zero detuning; the common
``exp(i omega x / v)`` factor cancels from every second moment.

Units: ``nu`` and the decay rates are rates, ``v`` a velocity, ``length`` a
length and ``delta_k`` a wavevector. Internally everything is expressed per
unit length (``nu / v``, ``kappa / v``), so only ratios ever enter the
hyperbolic functions.

The loss ports inject vacuum noise with the normalisation fixed by the
continuum limit of beamsplitters of transmission ``exp(-kappa dx / v)`` placed
every ``dx``; :mod:`twpa_lab.oracle` builds that chain explicitly.

Output moments are reported in the co-rotating frame in which the pump phase
has been gauged away: the anomalous moment differs from the lab-frame one by
``exp(-i delta_k L)``.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .errors import (
    AsymmetricInput,
    AsymptoticValidityWarning,
    DivergentGain,
    DomainError,
    NoMinimum,
    NonConstantProfile,
    QuadratureFailure,
    SubunityGain,
)
from .gaussian import Moments, vacuum

QUAD_EPSREL = 1e-10
QUAD_EPSABS = 1e-14
QUAD_LIMIT = 500


@dataclass(frozen=True)
class TabulatedProfile:
    """Decay-rate profile sampled at ``positions``.

    ``step=False`` interpolates linearly; ``step=True`` holds ``values[i]`` on
    ``[positions[i], positions[i+1])``. Outside the table the end values are
    held.
    """

    positions: tuple
    values: tuple
    step: bool = False

    def __post_init__(self):
        xs = tuple(float(x) for x in self.positions)
        ks = tuple(float(k) for k in self.values)
        if len(xs) != len(ks) or len(xs) < 1:
            raise DomainError("positions and values must be non-empty and equally long")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("positions must be strictly increasing")
        if min(ks) < 0:
            raise DomainError("decay rates must be >= 0")
        object.__setattr__(self, "positions", xs)
        object.__setattr__(self, "values", ks)

    def __call__(self, x: float) -> float:
        if self.step:
            i = int(np.searchsorted(self.positions, x, side="right")) - 1
            return self.values[min(max(i, 0), len(self.values) - 1)]
        return float(np.interp(x, self.positions, self.values))

    @property
    def breakpoints(self) -> tuple:
        return self.positions

    def constant_value(self) -> float | None:
        return self.values[0] if len(set(self.values)) == 1 else None


Profile = Union[float, TabulatedProfile, Callable[[float], float]]


def step_profile(length: float, kappa_first: float, kappa_second: float) -> TabulatedProfile:
    """``kappa_first`` on the first half of the device, ``kappa_second`` on the rest."""
    return TabulatedProfile((0.0, 0.5 * length), (kappa_first, kappa_second), step=True)


def profile_constant(p: Profile) -> float | None:
    if isinstance(p, (int, float)):
        return float(p)
    if isinstance(p, TabulatedProfile):
        return p.constant_value()
    return None


def profile_value(p: Profile, x: float) -> float:
    if isinstance(p, (int, float)):
        return float(p)
    return float(p(x))


def _breakpoints(p: Profile, a: float, b: float) -> list[float] | None:
    pts = [x for x in getattr(p, "breakpoints", ()) if a < x < b]
    return pts or None


@dataclass(frozen=True)
class DistributedConfig:
    nu: float
    v: float
    length: float
    kappa_signal: Profile = 0.0
    kappa_idler: Profile = 0.0
    delta_k: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise DomainError(f"nu must be > 0, got {self.nu}")
        if not self.v > 0:
            raise DomainError(f"v must be > 0, got {self.v}")
        if self.length < 0:
            raise DomainError(f"length must be >= 0, got {self.length}")
        for name in ("kappa_signal", "kappa_idler"):
            k = profile_constant(getattr(self, name))
            if k is not None and k < 0:
                raise DomainError(f"{name} must be >= 0, got {k}")

    @classmethod
    def from_average(
        cls, nu: float, v: float, length: float, kappa_bar: float, eps: float = 0.0, delta_k: float = 0.0
    ) -> DistributedConfig:
        """Constant rates ``kappa_signal = kappa_bar + eps``, ``kappa_idler = kappa_bar - eps``."""
        return cls(nu, v, length, kappa_bar + eps, kappa_bar - eps, delta_k)

    def with_length(self, length: float) -> DistributedConfig:
        return dataclasses.replace(self, length=length)

    @property
    def is_constant(self) -> bool:
        return profile_constant(self.kappa_signal) is not None and profile_constant(self.kappa_idler) is not None

    def constant_rates(self) -> tuple[float, float]:
        ks, ki = profile_constant(self.kappa_signal), profile_constant(self.kappa_idler)
        if ks is None or ki is None:
            raise NonConstantProfile("this closed form needs constant decay rates")
        return ks, ki

    @property
    def kappa_bar(self) -> float:
        ks, ki = self.constant_rates()
        return 0.5 * (ks + ki)

    @property
    def eps(self) -> float:
        ks, ki = self.constant_rates()
        return 0.5 * (ks - ki)

    @property
    def ideal_r(self) -> float:
        return self.length * self.nu / self.v

    @property
    def ideal_gain(self) -> float:
        return math.cosh(self.ideal_r) ** 2


def _per_length(c: DistributedConfig) -> tuple[float, float, float, float]:
    ks, ki = c.constant_rates()
    return c.nu / c.v, ks / c.v, ki / c.v, c.delta_k


def _entries(g: float, a_s: float, a_i: float, q: float, x: float) -> tuple[complex, complex, complex]:
    """(s_SS, s_SI, s_II) at position ``x`` in per-length units."""
    mix = (a_s - a_i + 2j * q) / 4.0
    nt = cmath.sqrt(g * g + mix * mix)
    z = nt * x
    shc = cmath.sinh(z) / nt if abs(z) > 1e-8 else x * (1.0 + z * z / 6.0)  # sinh(nt x)/nt
    ch = cmath.cosh(z)
    pre = math.exp(-(a_s + a_i) * x / 4.0)
    return pre * (ch - mix * shc), pre * g * shc, pre * (ch + mix * shc)


def transfer_matrix(c: DistributedConfig, x: float | None = None) -> np.ndarray:
    """2x2 map from ``(a_S, a_I^dagger)`` at the input to position ``x``.

    Defaults to ``x = L``. Only defined for constant decay rates.
    """
    x = c.length if x is None else x
    if not 0.0 <= x <= c.length:
        raise DomainError(f"x = {x} outside [0, {c.length}]")
    ss, si, ii = _entries(*_per_length(c), x)
    return np.array([[ss, si], [si, ii]])


def renormalized_rate(c: DistributedConfig) -> complex:
    r"""Effective parametric rate :math:`\sqrt{\nu^2 + ((\kappa_S-\kappa_I+2iv\Delta k)/4)^2}`."""
    ks, ki = c.constant_rates()
    return cmath.sqrt(c.nu**2 + ((ks - ki + 2j * c.v * c.delta_k) / 4.0) ** 2)


def _quad(f: Callable[[float], float], a: float, b: float, points=None) -> float:
    if b <= a:
        return 0.0
    out = quad(
        f, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, points=points, full_output=1
    )
    val, err = out[0], out[1]
    if len(out) > 3 and err > QUAD_EPSABS + QUAD_EPSREL * abs(val):
        raise QuadratureFailure(f"{out[3]} (estimate {val:.6g} +/- {err:.2g})")
    return val


def output_moments(c: DistributedConfig) -> Moments:
    """Output moments for vacuum inputs, including the loss-port noise integral."""
    g, a_s, a_i, q = _per_length(c)
    L = c.length
    if L == 0:
        return vacuum()
    ss, si, _ = _entries(g, a_s, a_i, q, L)
    n_s = abs(si) ** 2
    n_i = abs(si) ** 2
    anomalous = ss * si.conjugate()
    if a_i > 0:
        n_s += a_i * _quad(lambda y: abs(_entries(g, a_s, a_i, q, y)[1]) ** 2, 0.0, L)
    if a_s > 0:
        n_i += a_s * _quad(lambda y: abs(_entries(g, a_s, a_i, q, y)[1]) ** 2, 0.0, L)

        def cross(y: float) -> complex:
            e_ss, e_si, _ = _entries(g, a_s, a_i, q, y)
            return e_ss * e_si.conjugate()

        re = _quad(lambda y: cross(y).real, 0.0, L)
        im = _quad(lambda y: cross(y).imag, 0.0, L) if q != 0 else 0.0
        anomalous += a_s * complex(re, im)
    return Moments(n_s, n_i, complex(anomalous))


def gain(c: DistributedConfig) -> float:
    ss, _, _ = _entries(*_per_length(c), c.length)
    return abs(ss) ** 2


def symmetric_gain_closed_form(c: DistributedConfig) -> float:
    return math.exp(-c.kappa_bar * c.length / c.v) * c.ideal_gain


def cavity_gain_reference(nu: float, kappa_signal: float, kappa_idler: float) -> float:
    """Zero-frequency gain of a cavity-based non-degenerate parametric amplifier."""
    prod = kappa_signal * kappa_idler
    if prod == 0:
        return 1.0
    q = 2.0 * nu / math.sqrt(prod)
    if math.isclose(q, 1.0, rel_tol=1e-12):
        raise DivergentGain("cooperativity Q = 1: gain diverges")
    return ((q * q + 1.0) / (q * q - 1.0)) ** 2


def added_noise(c: DistributedConfig) -> float:
    """Input-referred added noise ``(N_S + 1/2) / G - 1/2`` in quanta.

    ``length == 0`` returns 0 (unit gain, nothing added).
    """
    if c.length == 0:
        return 0.0
    g = gain(c)
    if g <= 1.0:
        raise SubunityGain(f"gain {g:.6g} <= 1; added noise undefined")
    return (output_moments(c).n_signal + 0.5) / g - 0.5


def _xminus_coefficients(
    g: float, a_s: float, a_i: float, q: float, x: float, one_minus_t: float = 0.0
) -> tuple[complex, complex]:
    """Weights of the input ``a_S`` and ``a_I^dagger`` in ``a_S - t a_I^dagger``.

    At large gain each weight is a difference of two ``exp(nt x)`` sized
    terms. Splitting into growing and decaying exponentials, with the
    growing amplitudes written without cancellation, keeps the squeezed
    quadrature accurate to full relative precision.
    """
    t = 1.0 - one_minus_t
    mix = (a_s - a_i + 2j * q) / 4.0
    nt = cmath.sqrt(g * g + mix * mix)
    pre = math.exp(-(a_s + a_i) * x / 4.0)
    z = nt * x
    if z.real < 1.0:
        shc = cmath.sinh(z) / nt if abs(z) > 1e-8 else x * (1.0 + z * z / 6.0)
        ch = cmath.cosh(z)
        return pre * (ch - (mix + t * g) * shc), pre * ((g - t * mix) * shc - t * ch)
    d1 = -2.0 * mix * g / (nt + mix + g)  # nt - mix - g
    d2 = -2.0 * mix * g / (nt + g - mix)  # g - nt - mix
    grow1 = d1 + one_minus_t * g
    grow2 = d2 + one_minus_t * (nt + mix)
    decay1 = nt + mix + t * g
    decay2 = -(g + t * (nt - mix))
    ep, em = cmath.exp(z), cmath.exp(-z)
    k = pre / (2.0 * nt)
    return k * (grow1 * ep + decay1 * em), k * (grow2 * ep + decay2 * em)


def _xminus_variance(c: DistributedConfig, one_minus_t: float = 0.0) -> float:
    """X_- variance after an idler beamsplitter of amplitude transmission ``t``."""
    g, a_s, a_i, q = _per_length(c)
    L = c.length
    t = 1.0 - one_minus_t
    c1, c2 = _xminus_coefficients(g, a_s, a_i, q, L, one_minus_t)
    total = abs(c1) ** 2 + abs(c2) ** 2
    if L > 0 and a_s > 0:
        total += a_s * _quad(lambda y: abs(_xminus_coefficients(g, a_s, a_i, q, y, one_minus_t)[0]) ** 2, 0.0, L)
    if L > 0 and a_i > 0:
        total += a_i * _quad(lambda y: abs(_xminus_coefficients(g, a_s, a_i, q, y, one_minus_t)[1]) ** 2, 0.0, L)
    # vacuum admixed by the idler beamsplitter
    return 0.25 * total + 0.25 * (1.0 - t * t)


def squeezing(c: DistributedConfig) -> float:
    """Variance of the symmetric X_- output quadrature (vacuum 1/2).

    Equal to ``collective_quadrature_variance(output_moments(c), pi / 4)``,
    but computed from the quadrature's own transfer coefficients, which stays
    accurate when the photon numbers are many orders larger than the result.
    """
    if c.length == 0:
        return 0.5
    return _xminus_variance(c)


def symmetric_squeezing_closed_form(c: DistributedConfig) -> float:
    """X_- variance for equal constant rates and perfect phase matching."""
    _require_symmetric(c)
    k, nu, L, v = c.kappa_bar, c.nu, c.length, c.v
    return (k + 2.0 * nu * math.exp(-(2.0 * nu + k) * L / v)) / (2.0 * (k + 2.0 * nu))


def _require_symmetric(c: DistributedConfig) -> None:
    ks, ki = c.constant_rates()
    if ks != ki or c.delta_k != 0:
        raise AsymmetricInput("needs kappa_signal == kappa_idler and delta_k == 0")


def lumped_equivalent(c: DistributedConfig) -> tuple[float, float]:
    """Effective beamsplitter transmission ``eta`` and dark-port squeeze ``r_prime``.

    The symmetric distributed amplifier behaves like an ideal one with squeeze
    ``L nu / v`` followed by a beamsplitter of transmission ``eta`` whose dark
    port carries squeezed (not vacuum) light with parameter ``r_prime``;
    see :func:`lumped_equivalent_squeezing`.
    """
    _require_symmetric(c)
    k, nu, L, v = c.kappa_bar, c.nu, c.length, c.v
    if k == 0:
        return 1.0, math.inf
    att = math.exp(-k * L / v)
    eta = 2.0 * nu * att / (k + 2.0 * nu)
    e2r = k / (k + 2.0 * nu * (1.0 - att))
    return eta, -0.5 * math.log(e2r)


def lumped_equivalent_squeezing(eta: float, r_prime: float, r: float) -> float:
    return 0.5 * ((1.0 - eta) * math.exp(-2.0 * r_prime) + eta * math.exp(-2.0 * r))


def spatial_profile_squeezing(c: DistributedConfig) -> float:
    """X_- variance for a position-dependent decay rate common to both modes.

    Noise entering at ``x`` is squeezed over the remaining ``L - x``, so only
    loss near the output end matters once ``nu`` dominates ``kappa``.
    """
    ks, ki = c.kappa_signal, c.kappa_idler
    if not _same_profile(ks, ki, c.length):
        raise AsymmetricInput("needs kappa_signal(x) == kappa_idler(x)")
    if c.delta_k != 0:
        raise AsymmetricInput("needs delta_k == 0")
    L, g, v = c.length, c.nu / c.v, c.v
    const = profile_constant(ks)

    def kappa(x: float) -> float:
        return profile_value(ks, x) / v

    def tail(x: float) -> float:
        # int_x^L kappa / v
        if const is not None:
            return const / v * (L - x)
        return _quad(kappa, x, L, points=_breakpoints(ks, x, L))

    def integrand(x: float) -> float:
        return kappa(x) * math.exp(-tail(x) - 2.0 * g * (L - x))

    noise = _quad(integrand, 0.0, L, points=_breakpoints(ks, 0.0, L))
    return 0.5 * (math.exp(-tail(0.0) - 2.0 * g * L) + noise)


def _same_profile(a: Profile, b: Profile, length: float) -> bool:
    if a is b:
        return True
    ca, cb = profile_constant(a), profile_constant(b)
    if ca is not None or cb is not None:
        return ca == cb
    xs = set(np.linspace(0.0, length, 65))
    for p in (a, b):
        xs.update(x for x in getattr(p, "breakpoints", ()) if 0 <= x <= length)
    return all(math.isclose(profile_value(a, x), profile_value(b, x), rel_tol=1e-12, abs_tol=1e-15) for x in xs)


def estimated_optimal_length(c: DistributedConfig) -> float:
    """Leading-logarithm estimate ``(v / 2 nu) ln(nu / |kappa_S - kappa_I|)``."""
    ks, ki = c.constant_rates()
    diff = abs(ks - ki)
    if diff == 0:
        raise NoMinimum("symmetric loss: squeezing decreases monotonically with length")
    _guard_asymmetry(c)
    return c.v / (2.0 * c.nu) * math.log(c.nu / diff)


def optimal_length(c: DistributedConfig) -> float:
    """Length minimising the X_- variance for asymmetric constant loss.

    Searches ``[0, 5 L_est]`` with :func:`estimated_optimal_length` as
    ``L_est`` (floored at ``v / nu``).
    """
    ks, ki = c.constant_rates()
    if c.delta_k != 0:
        raise DomainError("optimal_length needs delta_k == 0")
    if ks == ki:
        raise NoMinimum("symmetric loss: squeezing decreases monotonically with length")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AsymptoticValidityWarning)
        upper = 5.0 * max(estimated_optimal_length(c), c.v / c.nu)
    res = minimize_scalar(
        lambda L: squeezing(c.with_length(L)), bounds=(0.0, upper), method="bounded", options={"xatol": 1e-10 * upper}
    )
    if not res.success or res.x > upper * (1.0 - 1e-6):
        raise NoMinimum(f"no interior minimum of squeezing on [0, {upper:.6g}]")
    return float(res.x)


class DistributedCorrection(NamedTuple):
    eta_idler_extra: float
    corrected_s: float


def _correction_deficit(c: DistributedConfig) -> float:
    """``1 - sqrt(eta_I)`` for the correcting beamsplitter, without cancellation."""
    ks, ki = c.constant_rates()
    if ks < ki:
        raise DomainError("correction assumes kappa_signal >= kappa_idler")
    half_eps = 0.25 * (ks - ki)  # eps / 2 with eps = (kappa_S - kappa_I) / 2
    root = math.sqrt(c.nu**2 + half_eps**2)
    # 1 - nu / (root + h) = (root + h - nu) / (root + h), root - nu = h^2 / (root + nu)
    return (half_eps * half_eps / (root + c.nu) + half_eps) / (root + half_eps)


def correction_transmission(c: DistributedConfig) -> float:
    """Idler beamsplitter transmission that cancels the amplified noise in X_-."""
    return (1.0 - _correction_deficit(c)) ** 2


def attenuate_idler(m: Moments, eta: float) -> Moments:
    return Moments(m.n_signal, eta * m.n_idler, math.sqrt(eta) * m.anomalous)


def distributed_correction(c: DistributedConfig) -> DistributedCorrection:
    if c.delta_k != 0:
        raise DomainError("distributed_correction needs delta_k == 0")
    deficit = _correction_deficit(c)
    if c.length == 0:
        return DistributedCorrection((1.0 - deficit) ** 2, 0.5)
    return DistributedCorrection((1.0 - deficit) ** 2, _xminus_variance(c, deficit))


# Asymptotic closed forms. They are approximations and warn outside
# |eps| / nu <= 0.25 or (where gain matters) ideal gain >= 100.


def _guard_asymmetry(c: DistributedConfig) -> None:
    if abs(c.eps) / c.nu > 0.25:
        warnings.warn(f"|eps|/nu = {abs(c.eps) / c.nu:.3g} > 0.25", AsymptoticValidityWarning, stacklevel=3)


def _guard_gain(c: DistributedConfig) -> None:
    if c.ideal_gain < 100:
        warnings.warn(f"ideal gain {c.ideal_gain:.3g} < 100", AsymptoticValidityWarning, stacklevel=3)


def asymptotic_gain(c: DistributedConfig) -> float:
    """Large-length gain including asymmetry and phase mismatch."""
    _guard_asymmetry(c)
    _guard_gain(c)
    nt = renormalized_rate(c)
    bracket = 1.0 - (c.eps + 1j * c.v * c.delta_k) / (2.0 * nt)
    return math.exp((2.0 * nt.real - c.kappa_bar) * c.length / c.v) / 4.0 * abs(bracket) ** 2


def asymptotic_added_noise(c: DistributedConfig) -> float:
    _guard_asymmetry(c)
    _guard_gain(c)
    k, e, nu = c.kappa_bar, c.eps, c.nu
    dk = c.v * c.delta_k
    inner = k + e + (dk * dk - e * e) / (4.0 * nu * (2.0 * nu - k))
    return 0.5 + inner / (2.0 * nu - k)


def asymptotic_squeezing(c: DistributedConfig) -> float:
    """Low-asymmetry X_- variance: symmetric part plus an amplified term."""
    if c.delta_k != 0:
        raise DomainError("asymptotic_squeezing is only stated for delta_k == 0")
    _guard_asymmetry(c)
    k, e, nu, L, v = c.kappa_bar, c.eps, c.nu, c.length, c.v
    nt = math.sqrt(nu * nu + 0.25 * e * e)
    base = (k + 2.0 * nu * math.exp(-2.0 * L * nt / v) * math.exp(-k * L / v)) / (2.0 * (k + 2.0 * nu))
    g_eff = math.exp(2.0 * L * nt / v) / 4.0
    return base + g_eff * e * e * math.exp(-k * L / v) / (4.0 * nu * (2.0 * nu - k))


def asymptotic_corrected_squeezing(c: DistributedConfig) -> float:
    if c.delta_k != 0:
        raise DomainError("asymptotic_corrected_squeezing is only stated for delta_k == 0")
    _guard_asymmetry(c)
    k, e, nu, L, v = c.kappa_bar, c.eps, c.nu, c.length, c.v
    nt = math.sqrt(nu * nu + 0.25 * e * e)
    base = (k + 2.0 * nu * math.exp(-2.0 * L * nt / v) * math.exp(-k * L / v)) / (2.0 * (k + 2.0 * nu))
    return base + 0.25 * (1.0 - correction_transmission(c))

