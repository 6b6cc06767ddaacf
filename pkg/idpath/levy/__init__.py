"""Shot noise decompositions of Lévy measures."""

from .representation import CovarianceEstimate, LevyRepresentation
from .gamma import GammaRep
from .stable import StableRep
from .tempered_stable import TemperedStableRep
from .exp_cp import ExponentialCPRep
from .factory import get_representation

__all__ = [
    "CovarianceEstimate",
    "LevyRepresentation",
    "GammaRep",
    "StableRep",
    "TemperedStableRep",
    "ExponentialCPRep",
    "get_representation",
]
