from typing import Any, Mapping

from idpath.errors import DomainError
from .representation import LevyRepresentation
from .gamma import GammaRep
from .stable import StableRep
from .tempered_stable import TemperedStableRep
from .exp_cp import ExponentialCPRep


def _require(spec: Mapping[str, Any], key: str) -> Any:
    if key not in spec:
        raise DomainError(f"representation '{spec.get('type')}' is missing field '{key}'")
    return spec[key]


def get_representation(spec: Mapping[str, Any]) -> LevyRepresentation:
    """
    Factory for Lévy representations.
    Args:
        spec: JSON-style object, e.g. {"type": "gamma", "a": 1.0, "beta": 1.0}
    Returns:
        An instance implementing LevyRepresentation
    Raises:
        ValueError if the type is unknown; DomainError for bad parameters.
    """
    name = str(spec.get("type", "")).lower()
    if name == "gamma":
        return GammaRep(a=float(_require(spec, "a")), beta=float(_require(spec, "beta")))
    elif name == "stable":
        atoms = [(a["xi"], float(a["w"])) for a in _require(spec, "atoms")]
        return StableRep(alpha=float(_require(spec, "alpha")), atoms=atoms)
    elif name == "tempered_stable":
        atoms = [
            (a["xi"], float(a["w"]), float(a["theta"])) for a in _require(spec, "atoms")
        ]
        return TemperedStableRep(alpha=float(_require(spec, "alpha")), atoms=atoms)
    elif name == "exp_cp":
        return ExponentialCPRep()
    raise ValueError(f"Unknown representation: {spec.get('type')}")
