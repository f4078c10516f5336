"""The Beta-Binomial Markov chain: simulation, transition laws, moments.

The chain alternates a Binomial count given the current Beta variable with a
Beta draw given the count:

    x_i | v_i     ~ Binomial(kappa, v_i)
    v_{i+1} | x_i ~ Beta(alpha + x_i, theta + kappa - x_i)

which leaves Beta(alpha, theta) stationary for the v-chain and the
Beta-Binomial law stationary for the x-chain. kappa=0 makes the v's i.i.d.;
kappa=INFINITY collapses the whole chain onto a single Beta(alpha, theta)
draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import _kernels
from .params import BBSBParams
from .sampling import beta_rv, binomial_rv


@dataclass(frozen=True)
class ChainSample:
    """A finite chain prefix: length variables ``v`` and, for finite kappa,
    the latent counts ``x`` generated between consecutive v's."""

    v: np.ndarray
    x: np.ndarray | None

    def __post_init__(self):
        if self.x is not None and self.x.shape[0] != self.v.shape[0] - 1:
            raise ValueError("x must hold one count per transition")


def _check_open_unit(name: str, value: float) -> None:
    if not (0.0 < value < 1.0):
        raise ValueError(f"{name} must lie in the open interval (0, 1), got {value}")


def step(v_prev: float, params: BBSBParams, rng: np.random.Generator):
    """One chain transition from ``v_prev``; returns ``(x, v_next)``."""
    kappa = params.require_finite_kappa("step")
    _check_open_unit("v_prev", v_prev)
    x = int(binomial_rv(rng, kappa, v_prev))
    v_next = float(beta_rv(rng, params.alpha + x, params.theta + kappa - x))
    return x, v_next


def sample_chain(params: BBSBParams, n: int, rng: np.random.Generator,
                 v1: float | None = None) -> ChainSample:
    """Simulate ``n`` length variables, starting from the stationary law.

    If ``v1`` is omitted it is drawn from Beta(alpha, theta). For
    kappa=INFINITY all variables equal one shared Beta(alpha, theta) draw and
    no counts are produced.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if v1 is None:
        v1 = float(beta_rv(rng, params.alpha, params.theta))
    else:
        _check_open_unit("v1", v1)
    if params.is_geometric:
        return ChainSample(v=np.full(n, v1), x=None)
    v = np.empty(n)
    x = np.empty(n - 1, dtype=np.int64)
    v[0] = v1
    for i in range(n - 1):
        x[i], v[i + 1] = step(v[i], params, rng)
    return ChainSample(v=v, x=x)


def sample_stationary_pairs(params: BBSBParams, size: int,
                            rng: np.random.Generator):
    """Vectorized draw of ``size`` independent stationary pairs (v_i, v_{i+1}).

    Same two-stage construction as :func:`step`, batched for Monte Carlo
    checks of the closed-form moments.
    """
    kappa = params.require_finite_kappa("sample_stationary_pairs")
    v1 = beta_rv(rng, np.full(size, params.alpha), np.full(size, params.theta))
    x = binomial_rv(rng, kappa, v1)
    v2 = beta_rv(rng, params.alpha + x, params.theta + kappa - x)
    return v1, v2


def sample_transitions(v_prev: float, params: BBSBParams, size: int,
                       rng: np.random.Generator) -> np.ndarray:
    """Vectorized draw of ``size`` independent transitions from a fixed
    ``v_prev`` (the conditional law of the next length variable)."""
    kappa = params.require_finite_kappa("sample_transitions")
    _check_open_unit("v_prev", v_prev)
    x = binomial_rv(rng, kappa, np.full(size, v_prev))
    return beta_rv(rng, params.alpha + x, params.theta + kappa - x)


def v_transition_density(v_next: float, v_prev: float,
                         params: BBSBParams) -> float:
    """Density of v_{i+1} at ``v_next`` given v_i = ``v_prev``.

    The mixture over the latent count is accumulated in log space.
    """
    kappa = params.require_finite_kappa("v_transition_density")
    _check_open_unit("v_next", v_next)
    _check_open_unit("v_prev", v_prev)
    return math.exp(_kernels.v_transition_logpdf(
        v_next, v_prev, kappa, params.alpha, params.theta))


def _log_rising(y: float, m: float) -> float:
    # log (y)_{m} = log Gamma(y+m) - log Gamma(y), for integer m >= 0
    return float(gammaln(y + m) - gammaln(y))


def _log_binom_coef(n: int, x: int) -> float:
    return float(gammaln(n + 1) - gammaln(x + 1) - gammaln(n - x + 1))


def x_transition_pmf(x_next: int, x_prev: int, params: BBSBParams) -> float:
    """Transition probability of the latent count chain."""
    kappa = params.require_finite_kappa("x_transition_pmf")
    for name, x in (("x_next", x_next), ("x_prev", x_prev)):
        if not (0 <= x <= kappa):
            raise ValueError(f"{name} must lie in [0, {kappa}], got {x}")
    log_p = (_log_binom_coef(kappa, x_next)
             + _log_rising(params.alpha + x_prev, x_next)
             + _log_rising(params.theta + kappa - x_prev, kappa - x_next)
             - _log_rising(params.alpha + params.theta + kappa, kappa))
    return math.exp(log_p)


def x_stationary_pmf(x: int, params: BBSBParams) -> float:
    """Stationary (Beta-Binomial) probability of the latent count chain."""
    kappa = params.require_finite_kappa("x_stationary_pmf")
    if not (0 <= x <= kappa):
        raise ValueError(f"x must lie in [0, {kappa}], got {x}")
    log_p = (_log_binom_coef(kappa, x)
             + _log_rising(params.alpha, x)
             + _log_rising(params.theta, kappa - x)
             - _log_rising(params.alpha + params.theta, kappa))
    return math.exp(log_p)


def conditional_mean(v: float, params: BBSBParams) -> float:
    """E[v_{i+1} | v_i = v] = (alpha + kappa v) / (alpha + theta + kappa)."""
    kappa = params.require_finite_kappa("conditional_mean")
    _check_open_unit("v", v)
    return (params.alpha + kappa * v) / (params.alpha + params.theta + kappa)


def conditional_variance(v: float, params: BBSBParams) -> float:
    """Var(v_{i+1} | v_i = v) in closed form."""
    kappa = params.require_finite_kappa("conditional_variance")
    _check_open_unit("v", v)
    s = params.alpha + params.theta + kappa
    num = ((params.alpha + kappa * v) * (params.theta + kappa * (1.0 - v))
           + kappa * v * (1.0 - v) * s)
    return num / (s * s * (s + 1.0))


def stationary_cov(params: BBSBParams) -> float:
    """Cov(v_i, v_{i+1}) under the stationary law."""
    kappa = params.require_finite_kappa("stationary_cov")
    a, t = params.alpha, params.theta
    return kappa * a * t / ((a + t) ** 2 * (a + t + 1.0) * (a + t + kappa))


def lag1_correlation(params: BBSBParams) -> float:
    """Corr(v_i, v_{i+1}) = kappa / (alpha + theta + kappa)."""
    kappa = params.require_finite_kappa("lag1_correlation")
    return kappa / (params.alpha + params.theta + kappa)
