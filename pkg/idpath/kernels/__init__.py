"""Deterministic kernels f(t, s) and their regularity metadata."""

from .base import REAL_LINE, CallableKernel, Interval, Kernel, Regularity, numeric_regularity_scan
from .elementary import IndicatorKernel, OUKernel, ReverseOUKernel
from .fractional import FracKHAKernel, LinearFracKernel, LogFracKernel
from .carma import CarmaKernel, build_carma
from .factory import get_kernel

__all__ = [
    "REAL_LINE",
    "CallableKernel",
    "Interval",
    "Kernel",
    "Regularity",
    "numeric_regularity_scan",
    "IndicatorKernel",
    "OUKernel",
    "ReverseOUKernel",
    "FracKHAKernel",
    "LinearFracKernel",
    "LogFracKernel",
    "CarmaKernel",
    "build_carma",
    "get_kernel",
]
