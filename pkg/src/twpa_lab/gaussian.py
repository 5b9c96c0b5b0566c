r"""Two-mode Gaussian states of one signal/idler frequency pair.

Three representations are used:

* :class:`Moments` -- the second moments :math:`(\langle B_S^\dagger B_S\rangle,
  \langle B_I^\dagger B_I\rangle, \langle B_S B_I\rangle)`. Photon numbers carry
  no quadrature convention.
* :class:`ThTmssParams` -- thermal two-mode squeezed state
  :math:`S_2(R)[\rho_{th}(\bar n_S)\otimes\rho_{th}(\bar n_I)]S_2^\dagger(R)`.
* covariance matrices in the basis :math:`(X_S, P_S, X_I, P_I)`, normalised so
  that the vacuum is the identity.

Quadrature variances (:func:`collective_quadrature_variance`) are instead
reported with vacuum variance 1/2, i.e. half of the corresponding quadratic
form of the covariance matrix.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPhysicalCovariance, NonPhysicalMoments

#: Absolute tolerance used for physicality checks and clamping. For large
#: photon numbers it is widened by the rounding floor of the thermal
#: occupations, see :meth:`Moments.tolerance`.
PHYSICALITY_TOL = 1e-9
_EPS = float(np.finfo(float).eps)

OMEGA = np.array(
    [[0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, -1.0, 0.0]]
)


@dataclass(frozen=True)
class Moments:
    """Second moments of a signal/idler pair with vacuum-like phase structure.

    ``anomalous`` is :math:`\\langle B_S B_I\\rangle`; the cross moment
    :math:`\\langle B_S B_I^\\dagger\\rangle` is assumed to vanish, which holds
    for every state produced in this package.
    """

    n_signal: float
    n_idler: float
    anomalous: complex = 0j

    def nbar(self) -> tuple[float, float]:
        """Unclamped thermal occupations of the equivalent th-TMSS."""
        n_s, n_i = self.n_signal, self.n_idler
        m2 = abs(self.anomalous) ** 2
        s = _symplectic_scale(self)
        # Written as differences of O(n^2) products so the
        # |M|^2 = n_S (n_I + 1) boundary (one-sided loss) lands on zero.
        nbar_s = 2.0 * (n_s * (n_i + 1.0) - m2) / (s + 1.0 + n_i - n_s)
        nbar_i = 2.0 * (n_i * (n_s + 1.0) - m2) / (s + 1.0 + n_s - n_i)
        return nbar_s, nbar_i

    def tolerance(self, tol: float = PHYSICALITY_TOL) -> float:
        """``tol`` plus the rounding floor of :meth:`nbar`.

        The occupations come from cancelling products of size
        ``(n_S + n_I + 1)**2``, so their absolute error grows quadratically.
        """
        a = self.n_signal + self.n_idler + 1.0
        return tol + 8.0 * _EPS * a * a

    def is_physical(self, tol: float = PHYSICALITY_TOL) -> bool:
        if self.n_signal < -tol or self.n_idler < -tol:
            return False
        a = self.n_signal + self.n_idler + 1.0
        t = self.tolerance(tol)
        if (a - 2.0 * abs(self.anomalous)) * (a + 2.0 * abs(self.anomalous)) < -t:
            return False
        return min(self.nbar()) >= -t


@dataclass(frozen=True)
class ThTmssParams:
    nbar_signal: float
    nbar_idler: float
    squeeze: float
    gauge_phase: float = 0.0

    def __post_init__(self):
        if self.nbar_signal < 0 or self.nbar_idler < 0:
            raise NonPhysicalMoments(
                f"negative thermal occupation ({self.nbar_signal}, {self.nbar_idler})"
            )
        if self.squeeze < 0:
            raise ValueError(f"squeeze parameter must be >= 0, got {self.squeeze}")


def vacuum() -> Moments:
    return Moments(0.0, 0.0, 0j)


def tmss_moments(r: float) -> Moments:
    """Pure two-mode squeezed vacuum with squeeze parameter ``r``."""
    return Moments(math.sinh(r) ** 2, math.sinh(r) ** 2, complex(0.5 * math.sinh(2 * r)))


def moments_from_th_tmss(p: ThTmssParams) -> Moments:
    total = p.nbar_signal + p.nbar_idler + 1.0
    sh2 = math.sinh(p.squeeze) ** 2
    anomalous = cmath.exp(1j * p.gauge_phase) * 0.5 * total * math.sinh(2 * p.squeeze)
    return Moments(p.nbar_signal + total * sh2, p.nbar_idler + total * sh2, anomalous)


def _symplectic_scale(m: Moments) -> float:
    """:math:`s = \\bar n_S + \\bar n_I + 1 = \\sqrt{(n_S+n_I+1)^2 - 4|M|^2}`."""
    a = m.n_signal + m.n_idler + 1.0
    two_m = 2.0 * abs(m.anomalous)
    s2 = (a - two_m) * (a + two_m)
    if s2 < -m.tolerance():
        raise NonPhysicalMoments(f"(n_S + n_I + 1)^2 < 4|M|^2 for {m}")
    return math.sqrt(max(s2, 0.0))


def th_tmss_from_moments(m: Moments) -> ThTmssParams:
    """Invert the th-TMSS correlators.

    Raises
    ------
    NonPhysicalMoments
        If either thermal occupation is below ``-tol`` with
        ``tol = m.tolerance()``. Occupations with magnitude at
        most ``tol`` are set to exactly zero.
    """
    s = _symplectic_scale(m)
    nbar_s, nbar_i = m.nbar()
    tol = m.tolerance()
    if nbar_s < -tol or nbar_i < -tol:
        raise NonPhysicalMoments(f"thermal occupations ({nbar_s:.3g}, {nbar_i:.3g}) for {m}")
    # inside the rounding floor the sign of nbar is noise; report exact zero
    nbar_s = 0.0 if abs(nbar_s) <= tol else nbar_s
    nbar_i = 0.0 if abs(nbar_i) <= tol else nbar_i
    mod = abs(m.anomalous)
    # asinh form is better conditioned than artanh(2|M|/(n_S+n_I+1)) near 1.
    squeeze = 0.5 * math.asinh(2.0 * mod / s) if s > 0 else math.inf
    phase = cmath.phase(m.anomalous) if mod > 0 else 0.0
    return ThTmssParams(nbar_s, nbar_i, squeeze, phase)


def purity(p: ThTmssParams) -> float:
    return 1.0 / ((1.0 + 2.0 * p.nbar_signal) * (1.0 + 2.0 * p.nbar_idler))


def log_negativity(p: ThTmssParams) -> float:
    if p.squeeze == 0:
        return 0.0
    total = p.nbar_signal + p.nbar_idler + 1.0
    n_r = total * math.cosh(2.0 * p.squeeze)
    prod = (1.0 + 2.0 * p.nbar_signal) * (1.0 + 2.0 * p.nbar_idler)
    # n_R^2 - prod without cancellation
    disc = (total * math.sinh(2.0 * p.squeeze)) ** 2 + (p.nbar_signal - p.nbar_idler) ** 2
    # n_R - sqrt(n_R^2 - prod), rationalised
    lam = prod / (n_r + math.sqrt(disc))
    return max(0.0, -math.log(lam))


def covariance_from_moments(m: Moments) -> np.ndarray:
    """4x4 covariance matrix, vacuum = identity, basis (X_S, P_S, X_I, P_I).

    A complex anomalous moment populates the X-P cross entries of the
    signal/idler block.
    """
    a = 2.0 * m.n_signal + 1.0
    b = 2.0 * m.n_idler + 1.0
    re, im = 2.0 * m.anomalous.real, 2.0 * m.anomalous.imag
    return np.array(
        [
            [a, 0.0, re, im],
            [0.0, a, im, -re],
            [re, im, b, 0.0],
            [im, -re, 0.0, b],
        ]
    )


def moments_from_covariance(sigma: np.ndarray) -> Moments:
    sigma = np.asarray(sigma, dtype=float)
    n_s = 0.25 * (sigma[0, 0] + sigma[1, 1]) - 0.5
    n_i = 0.25 * (sigma[2, 2] + sigma[3, 3]) - 0.5
    re = 0.25 * (sigma[0, 2] - sigma[1, 3])
    im = 0.25 * (sigma[0, 3] + sigma[1, 2])
    return Moments(float(n_s), float(n_i), complex(re, im))


def symplectic_eigenvalues(sigma: np.ndarray) -> np.ndarray:
    """Both symplectic eigenvalues in ascending order."""
    ev = np.abs(np.linalg.eigvals(1j * OMEGA @ np.asarray(sigma, dtype=float)))
    ev.sort()
    # eigenvalues come in +/- pairs
    return ev[::2]


def partial_transpose(sigma: np.ndarray) -> np.ndarray:
    """Partial transpose on the idler (P_I -> -P_I)."""
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    return flip @ np.asarray(sigma, dtype=float) @ flip


def metrics_from_covariance(sigma: np.ndarray) -> tuple[float, float]:
    """Logarithmic negativity and purity computed from the covariance matrix.

    Returns
    -------
    (float, float)
        ``(E_N, purity)``, with ``E_N`` summing ``-ln`` over the partial
        transpose's symplectic eigenvalues below one.
    """
    sigma = np.asarray(sigma, dtype=float)
    if not np.allclose(sigma, sigma.T, rtol=0, atol=1e-9 * max(1.0, np.abs(sigma).max())):
        raise NonPhysicalCovariance("covariance matrix is not symmetric")
    nu = symplectic_eigenvalues(sigma)
    if nu[0] < 1.0 - PHYSICALITY_TOL:
        raise NonPhysicalCovariance(f"symplectic eigenvalue {nu[0]:.12g} < 1")
    nu_pt = symplectic_eigenvalues(partial_transpose(sigma))
    e_n = float(-np.sum(np.log(nu_pt[nu_pt < 1.0])))
    mu = 1.0 / math.sqrt(np.linalg.det(sigma))
    return e_n, mu


def _quadrature_weights(theta: float, phi: float, quadrature: str) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    if quadrature == "x":
        # cos(theta) X_S - sin(theta) X_I(phi), X_I(phi) = cos(phi) X_I + sin(phi) P_I
        return np.array([c, 0.0, -s * math.cos(phi), -s * math.sin(phi)])
    if quadrature == "p":
        # cos(theta) P_S + sin(theta) P_I(phi), P_I(phi) = -sin(phi) X_I + cos(phi) P_I
        return np.array([0.0, c, -s * math.sin(phi), s * math.cos(phi)])
    raise ValueError(f"quadrature must be 'x' or 'p', got {quadrature!r}")


def collective_quadrature_variance(
    m: Moments, theta: float = math.pi / 4, phi: float = 0.0, quadrature: str = "x"
) -> float:
    r"""Variance of a weighted signal/idler quadrature (vacuum variance 1/2).

    ``quadrature="x"`` measures :math:`\cos\theta X_S - \sin\theta X_I^{\phi}`
    and ``"p"`` measures :math:`\cos\theta P_S + \sin\theta P_I^{\phi}`, where
    the idler quadratures are rotated by ``phi``. ``theta = pi/4, phi = 0``
    gives the symmetric :math:`X_-` (or :math:`P_+`) quadrature; choosing
    ``phi`` equal to the phase of the anomalous moment re-aligns a
    phase-rotated state.
    """
    w = _quadrature_weights(theta, phi, quadrature)
    return 0.5 * float(w @ covariance_from_moments(m) @ w)
