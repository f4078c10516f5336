"""Parameter containers shared across the package."""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Distinguished value for the dependence parameter selecting the
#: fully-dependent (Geometric) regime, where every length variable equals a
#: single Beta(alpha, theta) draw.
INFINITY = math.inf


@dataclass(frozen=True)
class BBSBParams:
    """Parameters (kappa, alpha, theta) of a Beta-Binomial stick-breaking prior.

    ``kappa`` is a non-negative integer or :data:`INFINITY`. It controls the
    lag-1 correlation kappa / (alpha + theta + kappa) of the length variables:
    kappa=0 gives i.i.d. Beta(alpha, theta) variables (a Dirichlet process at
    alpha=1) and kappa=INFINITY gives identical ones (a Geometric process).
    """

    kappa: float
    alpha: float
    theta: float

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be a positive finite real, got {self.alpha}")
        if not (self.theta > 0 and math.isfinite(self.theta)):
            raise ValueError(f"theta must be a positive finite real, got {self.theta}")
        if self.kappa != INFINITY:
            if self.kappa < 0 or self.kappa != int(self.kappa):
                raise ValueError(
                    f"kappa must be a non-negative integer or INFINITY, got {self.kappa}"
                )
            object.__setattr__(self, "kappa", int(self.kappa))

    @property
    def is_geometric(self) -> bool:
        return self.kappa == INFINITY

    def require_finite_kappa(self, op: str) -> int:
        if self.is_geometric:
            raise ValueError(f"{op} requires finite kappa; use the dedicated "
                             "single-draw code path for kappa=INFINITY")
        return int(self.kappa)


@dataclass(frozen=True)
class NormalGammaBase:
    """Conjugate base measure for a Gaussian kernel's (mean, precision) atom.

    The atom (m, p) is drawn as p ~ Gamma(shape, rate) and
    m | p ~ Normal(location, scale_factor / p); ``scale_factor`` multiplies
    the kernel variance, so large values give a diffuse prior on the mean.
    """

    location: float
    scale_factor: float
    shape: float
    rate: float

    def __post_init__(self):
        if self.scale_factor <= 0:
            raise ValueError("scale_factor must be positive")
        if self.shape <= 0 or self.rate <= 0:
            raise ValueError("shape and rate must be positive")


def parse_kappa(value) -> float:
    """Parse a kappa value from config/CLI input ('inf', integer, or float)."""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return INFINITY
        value = float(value)
    if value == INFINITY:
        return INFINITY
    return int(value)


def format_kappa(kappa: float) -> str:
    return "inf" if kappa == INFINITY else str(int(kappa))
