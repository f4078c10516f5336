"""Low-level random draws used by every stochastic operation.

All draws take an explicit ``numpy.random.Generator`` so that seeded runs are
fully reproducible.
"""

from __future__ import annotations

import numpy as np

# Open-interval clamp for Beta draws: keeps downstream log()/log1p() finite.
_LOW = 1e-300
_HIGH = float(np.nextafter(1.0, 0.0))


def beta_rv(rng: np.random.Generator, a, b):
    """Beta(a, b) via the ratio of two Gamma draws; works elementwise on arrays."""
    g1 = rng.standard_gamma(a)
    g2 = rng.standard_gamma(b)
    return np.clip(g1 / (g1 + g2), _LOW, _HIGH)


def binomial_rv(rng: np.random.Generator, n, p):
    """Binomial(n, p); n=0 is a point mass at 0 and consumes no randomness."""
    if np.isscalar(n) and n == 0:
        return 0 if np.isscalar(p) else np.zeros(np.shape(p), dtype=np.int64)
    return rng.binomial(n, p)


def categorical_from_logits(rng: np.random.Generator, logits: np.ndarray) -> int:
    """Draw an index from unnormalized log probabilities by inversion."""
    logits = np.asarray(logits, dtype=float)
    shifted = logits - logits.max()
    p = np.exp(shifted)
    cum = np.cumsum(p)
    idx = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    return min(idx, logits.shape[0] - 1)
