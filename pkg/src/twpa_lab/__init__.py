"""Lossy travelling-wave parametric amplifiers as two-mode Gaussian channels."""

from .distributed import DistributedConfig
from .errors import DomainError
from .gaussian import Moments, ThTmssParams
from .lumped import LossAsymmetry, LumpedConfig
from .oracle import ChainSpec, Stepping
from .qubits import BathParams, TwoQubitState

__version__ = "0.1.0"

__all__ = [
    "BathParams",
    "ChainSpec",
    "DistributedConfig",
    "DomainError",
    "LossAsymmetry",
    "LumpedConfig",
    "Moments",
    "Stepping",
    "ThTmssParams",
    "TwoQubitState",
]
