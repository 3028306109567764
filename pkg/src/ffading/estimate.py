"""Result and tolerance containers shared by the numerical kernels."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SeriesOptions:
    """Truncation and quadrature controls for series/integral evaluations.

    rel_tol is the target relative accuracy, abs_tol an absolute floor used
    when the true value is (near) zero.  max_order caps the per-dimension
    series order; max_total_terms caps the total multi-index count of a
    multivariate sum.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_order: int = 512
    max_total_terms: float = 5e6

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if not (self.abs_tol > 0 and self.max_total_terms > 0):
            raise ValueError("caps must be positive")


DEFAULT_OPTIONS = SeriesOptions()


@dataclass
class Estimate:
    """A numeric result together with its error/diagnostic record.

    err_bound is a truncation bound or quadrature error estimate (>= 0).
    converged=False means the caller must treat the value as unreliable.
    """

    value: float
    err_bound: float = 0.0
    terms_used: int = 0
    converged: bool = True
    method: str = ""
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.err_bound < 0:
            raise ValueError("err_bound must be >= 0")

    def __float__(self) -> float:
        return float(self.value)
