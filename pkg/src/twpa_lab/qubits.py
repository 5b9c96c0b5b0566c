r"""Two qubits stabilised by the signal/idler output of a lossy TWPA.

Qubit 1 is resonant with the signal and qubit 2 with the idler. The bath seen
by the qubits is characterised by the photon numbers ``n1``, ``n2`` and the
anomalous correlator ``m`` of the amplifier output.

Superoperators act on column-stacked density matrices,
``vec(A rho B) = kron(B.T, A) vec(rho)``, in the basis ``|gg>, |ge>, |eg>,
|ee>`` with qubit 1 as the left tensor factor and ``|g> = (1, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateNullSpace, DomainError
from .gaussian import PHYSICALITY_TOL, Moments
from .lumped import LumpedConfig, output_moments

_SM = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|
_I2 = np.eye(2, dtype=complex)
_I4 = np.eye(4, dtype=complex)
SIGMA_MINUS = (np.kron(_SM, _I2), np.kron(_I2, _SM))
SIGMA_PLUS = tuple(s.T.copy() for s in SIGMA_MINUS)
_SYSY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class BathParams:
    gamma1: float
    gamma2: float
    n1: float
    n2: float
    m: complex

    def __post_init__(self):
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise DomainError("coupling rates must be > 0")
        if not Moments(self.n1, self.n2, complex(self.m)).is_physical():
            raise DomainError(f"bath correlators ({self.n1}, {self.n2}, {self.m}) are not physical")


@dataclass(frozen=True)
class TwoQubitState:
    rho: np.ndarray

    def validate(self, tol: float = 1e-10) -> None:
        r = self.rho
        if r.shape != (4, 4):
            raise DomainError("two-qubit density matrix must be 4x4")
        if not np.allclose(r, r.conj().T, atol=tol, rtol=0):
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(r) - 1.0) > tol:
            raise DomainError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(r).min() < -PHYSICALITY_TOL:
            raise DomainError("density matrix has a negative eigenvalue")

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))


def bath_from_moments(m: Moments, gamma1: float = 1.0, gamma2: float = 1.0) -> BathParams:
    return BathParams(gamma1, gamma2, m.n_signal, m.n_idler, m.anomalous)


def bath_from_lumped(c: LumpedConfig, gamma1: float = 1.0, gamma2: float = 1.0) -> BathParams:
    return bath_from_moments(output_moments(c), gamma1, gamma2)


def _sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(b.T, a)


def _anticommutator(a: np.ndarray) -> np.ndarray:
    return np.kron(_I4, a) + np.kron(a.T, _I4)


def dissipator(c: np.ndarray) -> np.ndarray:
    cdc = c.conj().T @ c
    return _sandwich(c, c.conj().T) - 0.5 * _anticommutator(cdc)


def liouvillian(b: BathParams) -> np.ndarray:
    """16x16 generator of the two-qubit master equation."""
    (sm1, sm2), (sp1, sp2) = SIGMA_MINUS, SIGMA_PLUS
    gen = b.gamma1 * ((1.0 + b.n1) * dissipator(sm1) + b.n1 * dissipator(sp1))
    gen = gen + b.gamma2 * ((1.0 + b.n2) * dissipator(sm2) + b.n2 * dissipator(sp2))
    # anomalous correlations: pair creation / annihilation across the qubits
    up = _sandwich(sp1, sp2) + _sandwich(sp2, sp1) - _anticommutator(sp1 @ sp2)
    down = _sandwich(sm1, sm2) + _sandwich(sm2, sm1) - _anticommutator(sm2 @ sm1)
    m = complex(b.m)
    return gen - math.sqrt(b.gamma1 * b.gamma2) * (m * up + m.conjugate() * down)


def apply(gen: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return (gen @ rho.reshape(-1, order="F")).reshape(4, 4, order="F")


def steady_state(gen: np.ndarray, uniqueness_tol: float = 1e-8) -> TwoQubitState:
    """Null vector of the generator as a normalised density matrix."""
    _, s, vh = np.linalg.svd(gen)
    if s[-2] < uniqueness_tol * max(1.0, s[0]):
        raise DegenerateNullSpace(f"second-smallest singular value {s[-2]:.3g}")
    rho = vh[-1].conj().reshape(4, 4, order="F")
    rho = 0.5 * (rho + rho.conj().T)
    return TwoQubitState(rho / np.trace(rho).real)


def concurrence(state: TwoQubitState | np.ndarray) -> float:
    rho = state.rho if isinstance(state, TwoQubitState) else np.asarray(state)
    ev = np.linalg.eigvals(rho @ _SYSY @ rho.conj() @ _SYSY)
    lam = np.sort(np.sqrt(np.abs(ev.real)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def lumped_concurrence(c: LumpedConfig, gamma: float = 1.0) -> float:
    """Steady-state concurrence for a beamsplitter-loss bath, gamma1 = gamma2."""
    return concurrence(steady_state(liouvillian(bath_from_lumped(c, gamma, gamma))))
