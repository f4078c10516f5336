"""NumPy reference implementation of the hot numerical kernels.

Everything here is a pure function of floats/arrays; no RNG is consumed, so
the compiled backend in ``_core.pyx`` can replace this module without
changing any sampling trajectory.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln, logsumexp

__all__ = [
    "v_transition_logpdf",
    "chain_loglik",
    "kappa_support_logliks",
    "step2_logweights",
    "pair_logweights",
]


def _transition_term_table(kappa: int, alpha: float, theta: float):
    """Per-x constants of the one-step transition mixture at a given kappa.

    Returns (lognorm, a1, b1) with, for x = 0..kappa,
    lognorm[x] = log C(kappa, x) + log 1/B(alpha+x, theta+kappa-x),
    a1[x] = alpha+x-1 and b1[x] = theta+kappa-x-1 (Beta density exponents).
    """
    x = np.arange(kappa + 1, dtype=float)
    a = alpha + x
    b = theta + kappa - x
    log_binom_coef = gammaln(kappa + 1) - gammaln(x + 1) - gammaln(kappa - x + 1)
    log_beta_norm = gammaln(a + b) - gammaln(a) - gammaln(b)
    return log_binom_coef + log_beta_norm, a - 1.0, b - 1.0


def pair_logweights(v_prev: float, v_next: float, kappa: int,
                    alpha: float, theta: float) -> np.ndarray:
    """Log-weights over x = 0..kappa of Bin(x|kappa,v_prev)*Beta(v_next|alpha+x, theta+kappa-x)."""
    lognorm, a1, b1 = _transition_term_table(kappa, alpha, theta)
    x = np.arange(kappa + 1, dtype=float)
    lvp, l1vp = np.log(v_prev), np.log1p(-v_prev)
    lvn, l1vn = np.log(v_next), np.log1p(-v_next)
    return lognorm + x * lvp + (kappa - x) * l1vp + a1 * lvn + b1 * l1vn


def v_transition_logpdf(v_next: float, v_prev: float, kappa: int,
                        alpha: float, theta: float) -> float:
    """Log density of one chain transition, summed over the latent count."""
    return float(logsumexp(pair_logweights(v_prev, v_next, kappa, alpha, theta)))


def chain_loglik(v: np.ndarray, kappa: int, alpha: float, theta: float) -> float:
    """Sum of transition log densities along a length-variable sequence.

    Only transition terms are included; the marginal of the first variable
    does not depend on kappa and is left out on purpose.
    """
    v = np.asarray(v, dtype=float)
    m = v.shape[0]
    if m < 2:
        return 0.0
    lognorm, a1, b1 = _transition_term_table(kappa, alpha, theta)
    x = np.arange(kappa + 1, dtype=float)
    lv, l1v = np.log(v), np.log1p(-v)
    # term[i, x] = lognorm[x] + x*(log v_i - log(1-v_i)) + kappa*log(1-v_i)
    #             + a1[x]*log v_{i+1} + b1[x]*log(1-v_{i+1})
    prev_part = x[None, :] * (lv[:-1] - l1v[:-1])[:, None] + kappa * l1v[:-1, None]
    next_part = a1[None, :] * lv[1:, None] + b1[None, :] * l1v[1:, None]
    terms = lognorm[None, :] + prev_part + next_part
    return float(np.sum(logsumexp(terms, axis=1)))


def kappa_support_logliks(v: np.ndarray, support: np.ndarray,
                          alpha: float, theta: float) -> np.ndarray:
    """chain_loglik evaluated at every kappa value in ``support``."""
    return np.array([chain_loglik(v, int(k), alpha, theta) for k in support])


def step2_logweights(v_prev: float, kappa: int, alpha: float, theta: float,
                     a_count: float, t_count: float) -> np.ndarray:
    """Log mixture weights over x = 0..kappa of the blocked length-variable update.

    Unnormalized: rising-factorial ratio of the count-tilted Beta terms times
    the Binomial kernel at the previously drawn variable. The x-independent
    denominator is dropped.
    """
    x = np.arange(kappa + 1, dtype=float)
    a = alpha + x
    b = theta + kappa - x
    rising = gammaln(a + a_count) - gammaln(a) + gammaln(b + t_count) - gammaln(b)
    log_binom_coef = gammaln(kappa + 1) - gammaln(x + 1) - gammaln(kappa - x + 1)
    return (rising + log_binom_coef
            + x * np.log(v_prev) + (kappa - x) * np.log1p(-v_prev))
