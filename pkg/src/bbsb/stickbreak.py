"""Stick-breaking weights, adaptive truncation and prior group counts.

Length variables v_1, v_2, ... in (0,1) are broken into weights
w_1 = v_1, w_j = v_j * prod_{i<j} (1 - v_i). The running remaining stick
prod_{i<=j} (1 - v_i) is carried along so prefixes are never re-multiplied;
once it drops below 1e-300 the bookkeeping continues in log space.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .params import BBSBParams
from .sampling import beta_rv, binomial_rv
from . import chain as chain_mod

#: Residual magnitude below which the linear-space product is abandoned.
_LOG_SWITCH = 1e-300

#: Default safety cap on the number of sticks grown by extend_until.
DEFAULT_MAX_STICKS = 10 ** 6


class TruncationError(RuntimeError):
    """Raised when growing the stick exceeds the safety cap, which signals
    numerically degenerate parameters rather than a tolerable truncation."""


class StickWeights:
    """Mutable prefix of a stick-breaking sequence.

    Attributes ``v``, ``w`` and ``cum`` are parallel lists: length variables,
    weights, and the running sum of weights.
    """

    __slots__ = ("v", "w", "cum", "_residual", "_log_residual")

    def __init__(self):
        self.v: list[float] = []
        self.w: list[float] = []
        self.cum: list[float] = []
        self._residual = 1.0
        self._log_residual = 0.0

    def __len__(self) -> int:
        return len(self.v)

    @property
    def last_v(self) -> float:
        return self.v[-1]

    @property
    def remaining(self) -> float:
        """Remaining stick length prod_{i<=j}(1 - v_i)."""
        if self._residual >= _LOG_SWITCH:
            return self._residual
        return math.exp(self._log_residual)

    @property
    def log_remaining(self) -> float:
        return self._log_residual

    def append(self, v_i: float) -> float:
        """Break off the next stick; returns the new weight."""
        if not (0.0 <= v_i <= 1.0):
            raise ValueError(f"length variable must lie in [0, 1], got {v_i}")
        if self._residual >= _LOG_SWITCH:
            w_i = self._residual * v_i
        elif v_i > 0.0:
            w_i = math.exp(self._log_residual + math.log(v_i))
        else:
            w_i = 0.0
        self._residual *= 1.0 - v_i
        self._log_residual = (-math.inf if v_i == 1.0
                              else self._log_residual + math.log1p(-v_i))
        self.v.append(v_i)
        self.w.append(w_i)
        # the running sum is carried as 1 - remaining stick: identical in
        # exact arithmetic, but never drifts above 1 under float rounding
        self.cum.append(1.0 - self.remaining)
        return w_i


def stick_break(v) -> StickWeights:
    """Build weights from a given sequence of length variables.

    Endpoint values are handled: v_i = 1 consumes the whole remaining stick,
    v_i = 0 contributes nothing.
    """
    state = StickWeights()
    for v_i in np.asarray(v, dtype=float):
        state.append(float(v_i))
    return state


def extend_until(params: BBSBParams, threshold: float,
                 rng: np.random.Generator,
                 state: StickWeights | None = None,
                 max_sticks: int = DEFAULT_MAX_STICKS) -> StickWeights:
    """Grow the stick until the cumulative weight exceeds ``threshold``.

    New length variables continue the Beta chain from the current last one
    (for kappa=INFINITY they repeat the single shared draw). The ``state``
    argument is mutated and returned; omit it to start a fresh stick.
    """
    if not (0.0 <= threshold < 1.0):
        raise ValueError(f"threshold must lie in [0, 1), got {threshold}")
    if state is None:
        state = StickWeights()
    while not state.cum or state.cum[-1] <= threshold:
        if len(state) >= max_sticks:
            raise TruncationError(
                f"needed more than {max_sticks} sticks to pass cumulative "
                f"weight {threshold} with parameters {params}")
        if len(state) == 0:
            v_next = float(beta_rv(rng, params.alpha, params.theta))
        elif params.is_geometric:
            v_next = state.last_v
        else:
            _, v_next = chain_mod.step(state.last_v, params, rng)
        state.append(v_next)
    return state


@dataclass
class KnHistogram:
    """Monte Carlo histogram of the number of distinct groups in a sample."""

    n: int
    counts: dict[int, int]
    reps: int

    @classmethod
    def from_samples(cls, n: int, samples) -> "KnHistogram":
        samples = np.asarray(samples, dtype=np.int64)
        values, freq = np.unique(samples, return_counts=True)
        return cls(n=n, counts={int(m): int(c) for m, c in zip(values, freq)},
                   reps=int(samples.shape[0]))

    def proportions(self) -> dict[int, float]:
        return {m: c / self.reps for m, c in sorted(self.counts.items())}

    def mean(self) -> float:
        return sum(m * c for m, c in self.counts.items()) / self.reps

    def variance(self) -> float:
        mu = self.mean()
        return sum(c * (m - mu) ** 2 for m, c in self.counts.items()) / self.reps

    def quantile(self, q: float) -> int:
        target = q * self.reps
        acc = 0
        for m, c in sorted(self.counts.items()):
            acc += c
            if acc >= target:
                return m
        return max(self.counts)

    def mode(self) -> int:
        return max(sorted(self.counts.items()), key=lambda mc: mc[1])[0]

    def total_variation(self, other: "KnHistogram") -> float:
        support = set(self.counts) | set(other.counts)
        return 0.5 * sum(abs(self.counts.get(m, 0) / self.reps
                             - other.counts.get(m, 0) / other.reps)
                         for m in support)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["m", "count", "proportion"])
            for m, c in sorted(self.counts.items()):
                writer.writerow([m, c, f"{c / self.reps:.17g}"])


def _geometric_memberships(lam: float, u: np.ndarray) -> np.ndarray:
    # Exact inversion of the geometric cumulative weights 1 - (1-lam)^i.
    ratio = np.log1p(-u) / math.log1p(-lam)
    return np.floor(ratio).astype(np.int64) + 1


def sample_Kn(n: int, params: BBSBParams, reps: int,
              rng: np.random.Generator,
              max_sticks: int = DEFAULT_MAX_STICKS) -> KnHistogram:
    """Sample the prior number of distinct groups among ``n`` draws.

    Each replicate draws n uniforms, grows the stick past their maximum and
    assigns each uniform to the stick interval containing it (ties, which
    have probability zero, fall to the lower index).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if reps < 1:
        raise ValueError("reps must be at least 1")
    samples = np.empty(reps, dtype=np.int64)
    for r in range(reps):
        u = rng.random(n)
        if params.is_geometric:
            lam = float(beta_rv(rng, params.alpha, params.theta))
            d = _geometric_memberships(lam, u)
        else:
            state = extend_until(params, float(u.max()), rng,
                                 max_sticks=max_sticks)
            d = np.searchsorted(np.asarray(state.cum), u, side="left") + 1
        samples[r] = np.unique(d).shape[0]
    return KnHistogram.from_samples(n, samples)


@dataclass(frozen=True)
class ProbEstimate:
    """Monte Carlo probability estimate with its binomial standard error."""

    estimate: float
    stderr: float
    reps: int


def prob_decreasing(j: int, params: BBSBParams, reps: int,
                    rng: np.random.Generator) -> ProbEstimate:
    """Estimate P[w_{j+1} < w_j], i.e. P[v_{j+1} (1 - v_j) < v_j].

    For kappa=INFINITY the weights are strictly decreasing almost surely, so
    the estimate is exactly 1.
    """
    if j < 1:
        raise ValueError("j must be at least 1")
    if params.is_geometric:
        return ProbEstimate(estimate=1.0, stderr=0.0, reps=reps)
    kappa = int(params.kappa)
    v = beta_rv(rng, np.full(reps, params.alpha), np.full(reps, params.theta))
    v_prev = v
    for _ in range(j):
        v_prev = v
        x = binomial_rv(rng, kappa, v_prev)
        v = beta_rv(rng, params.alpha + x, params.theta + kappa - x)
    hits = float(np.mean(v * (1.0 - v_prev) < v_prev))
    stderr = math.sqrt(max(hits * (1.0 - hits), 0.0) / reps)
    return ProbEstimate(estimate=hits, stderr=stderr, reps=reps)
