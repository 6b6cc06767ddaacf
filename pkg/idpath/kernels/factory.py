from typing import Any, Mapping

from idpath.errors import DomainError
from .base import Kernel
from .carma import build_carma
from .elementary import IndicatorKernel, OUKernel, ReverseOUKernel
from .fractional import FracKHAKernel, LinearFracKernel, LogFracKernel


def _require(spec: Mapping[str, Any], key: str) -> Any:
    if key not in spec:
        raise DomainError(f"kernel '{spec.get('type')}' is missing field '{key}'")
    return spec[key]


def get_kernel(spec: Mapping[str, Any], horizon: float = 1.0) -> Kernel:
    """
    Factory for kernels.
    Args:
        spec: JSON-style object, e.g. {"type": "ou", "lambda": 1.0}
        horizon: time horizon T of the evaluation grid
    Returns:
        An instance implementing Kernel
    Raises:
        ValueError if the type is unknown; DomainError for bad parameters.
    """
    name = str(spec.get("type", "")).lower()
    if name == "indicator":
        return IndicatorKernel(horizon=horizon)
    elif name == "ou":
        return OUKernel(
            lam=float(_require(spec, "lambda")),
            mu=float(spec.get("mu", 0.0)),
            x0=float(spec.get("x0", 0.0)),
            horizon=horizon,
        )
    elif name == "reverse_ou":
        return ReverseOUKernel(lam=float(_require(spec, "lambda")), horizon=horizon)
    elif name == "frac_kha":
        return FracKHAKernel(
            H=float(_require(spec, "H")),
            alpha=float(_require(spec, "alpha")),
            c=float(spec.get("c", 1.0)),
            horizon=horizon,
        )
    elif name == "linear_frac":
        return LinearFracKernel(
            n=_require(spec, "n"),
            H=float(_require(spec, "H")),
            alpha=float(_require(spec, "alpha")),
            horizon=horizon,
        )
    elif name == "carma":
        return build_carma(_require(spec, "a"), _require(spec, "b"), horizon=horizon)
    elif name == "log_frac":
        return LogFracKernel(horizon=horizon)
    raise ValueError(f"Unknown kernel: {spec.get('type')}")
