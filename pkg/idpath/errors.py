"""
Error and warning types shared across idpath.

Every error carries a machine-readable ``code`` and the process ``exit_code``
the CLI returns when the error aborts a run.
"""

from typing import List, Optional


class IdpathError(Exception):
    """Base class for all idpath errors."""

    code = "IDPATH_ERROR"
    exit_code = 1


class DomainError(IdpathError, ValueError):
    """An argument lies outside the admissible domain of an operation."""

    code = "DOMAIN"
    exit_code = 2


class UnsupportedError(IdpathError):
    """The operation has no implementation for this representation."""

    code = "UNSUPPORTED"
    exit_code = 2


class GridError(IdpathError, ValueError):
    """A requested time does not lie on the evaluation grid."""

    code = "GRID"
    exit_code = 2


class CarmaRootError(DomainError):
    """The autoregressive polynomial has inadmissible roots."""

    code = "CARMA_ROOTS"

    def __init__(self, message: str, root: Optional[complex] = None):
        super().__init__(message)
        self.root = root


class KernelUnboundedError(IdpathError):
    """The simulator refuses kernels that fail boundedness or square-integrability."""

    code = "KERNEL_UNBOUNDED"
    exit_code = 3


class Assumption3AError(IdpathError):
    """The small-jump covariance is not positive definite."""

    code = "ASSUMPTION_3A"
    exit_code = 4


class ConfigError(IdpathError):
    """An experiment config failed validation; holds every violation found."""

    code = "CONFIG"
    exit_code = 2

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class GaussianInvalidWarning(UserWarning):
    """Gaussian refinement requested although Assumption 3(b) fails."""

    code = "GAUSSIAN_INVALID"


class TailMassWarning(UserWarning):
    """A Monte Carlo integral left non-negligible mass beyond its cut-off."""

    code = "TAIL_MASS"
