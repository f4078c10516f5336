"""Slice-Gibbs sampler for univariate Gaussian mixtures with a Beta-Binomial
stick-breaking prior.

Each sweep updates, in order: the Gaussian atoms (conjugate Normal-Gamma
draws), the length and slice variables as a block, the memberships, and
optionally the dependence parameter kappa over a finite-support prior. Only
finitely many sticks are instantiated; after drawing the slice variables the
stick is grown until the remaining weight mass cannot exceed any slice, so
the membership step sees a complete support.

The kappa=INFINITY (Geometric) regime swaps the block update for the exact
single-draw conditional implied by the geometric weights, and never
approximates infinity by a large kappa.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import _kernels
from .params import INFINITY, BBSBParams, NormalGammaBase, format_kappa
from .sampling import beta_rv, binomial_rv, categorical_from_logits
from .stickbreak import DEFAULT_MAX_STICKS, KnHistogram, TruncationError

_LOG_2PI = math.log(2.0 * math.pi)


# ---------------------------------------------------------------------------
# state containers


@dataclass
class MixtureState:
    """Full Gibbs state: atoms, length/slice variables, memberships, kappa.

    Membership indices are 0-based; stick j of ``phi`` instantiated sticks
    carries atom (means[j], precisions[j]) and weight w[j].
    """

    means: np.ndarray
    precisions: np.ndarray
    v: np.ndarray
    w: np.ndarray
    u: np.ndarray
    d: np.ndarray
    kappa: float

    @property
    def phi(self) -> int:
        return self.v.shape[0]

    def snapshot(self) -> "MixtureState":
        return MixtureState(
            means=self.means.copy(), precisions=self.precisions.copy(),
            v=self.v.copy(), w=self.w.copy(), u=self.u.copy(),
            d=self.d.copy(), kappa=self.kappa)

    def num_groups(self) -> int:
        return int(np.unique(self.d).shape[0])


@dataclass(frozen=True)
class CountProfile:
    """Per-stick membership counts: ``assigned[i]`` observations sit on stick
    i, ``beyond[i]`` sit on sticks after i."""

    assigned: np.ndarray
    beyond: np.ndarray

    @classmethod
    def from_memberships(cls, d: np.ndarray, phi: int) -> "CountProfile":
        assigned = np.bincount(d, minlength=phi).astype(np.int64)
        beyond = d.shape[0] - np.cumsum(assigned)
        return cls(assigned=assigned, beyond=beyond)


@dataclass(frozen=True)
class KappaPrior:
    """Finite-support prior pmf for the dependence parameter."""

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        if self.support.shape[0] == 0:
            raise ValueError("kappa prior support must be non-empty")
        if self.support.shape != self.probs.shape:
            raise ValueError("support and probs must align")
        if not math.isclose(float(self.probs.sum()), 1.0, abs_tol=1e-9):
            raise ValueError("prior probabilities must sum to 1")

    @classmethod
    def uniform(cls, lo: int = 0, hi: int = 100) -> "KappaPrior":
        support = np.arange(lo, hi + 1, dtype=np.int64)
        return cls(support=support, probs=np.full(support.shape[0],
                                                  1.0 / support.shape[0]))

    @classmethod
    def point_mass(cls, kappa: int) -> "KappaPrior":
        return cls(support=np.array([kappa], dtype=np.int64),
                   probs=np.array([1.0]))

    def mode(self) -> int:
        return int(self.support[int(np.argmax(self.probs))])


# ---------------------------------------------------------------------------
# small numerical helpers


def _stick_weights(v: np.ndarray):
    """Weights and cumulative weights of a finite stick prefix."""
    residual_before = np.concatenate(([1.0], np.cumprod(1.0 - v)[:-1]))
    w = v * residual_before
    return w, np.cumsum(w)


def _normal_logpdf_matrix(y: np.ndarray, means: np.ndarray,
                          precisions: np.ndarray) -> np.ndarray:
    """(len(y), len(means)) matrix of Gaussian log densities."""
    z = (y[:, None] - means[None, :]) * np.sqrt(precisions)[None, :]
    return 0.5 * (np.log(precisions)[None, :] - _LOG_2PI) - 0.5 * z * z


def _draw_atoms(base: NormalGammaBase, size: int, rng: np.random.Generator):
    p = rng.standard_gamma(np.full(size, base.shape)) / base.rate
    m = base.location + rng.standard_normal(size) * np.sqrt(
        base.scale_factor / p)
    return m, p


# ---------------------------------------------------------------------------
# full conditional updates


def update_atoms(state: MixtureState, data: np.ndarray,
                 base: NormalGammaBase, rng: np.random.Generator
                 ) -> MixtureState:
    """Redraw every atom from its Normal-Gamma full conditional.

    With n_j members of mean ybar_j and within-group sum of squares S_j the
    posterior is

        shape' = shape + n_j/2
        rate'  = rate + S_j/2 + n_j*(ybar_j - location)^2 / (2*(1 + sf*n_j))
        location' = (location + sf*n_j*ybar_j) / (1 + sf*n_j)
        sf' = sf / (1 + sf*n_j)

    (sf = scale_factor). Empty sticks reduce to a fresh draw from the base.
    """
    phi = state.phi
    n_j = np.bincount(state.d, minlength=phi).astype(float)
    sum_j = np.bincount(state.d, weights=data, minlength=phi)
    sumsq_j = np.bincount(state.d, weights=data * data, minlength=phi)
    ybar = np.where(n_j > 0, sum_j / np.maximum(n_j, 1.0), 0.0)
    within_ss = sumsq_j - n_j * ybar * ybar
    denom = 1.0 + base.scale_factor * n_j
    shape_post = base.shape + 0.5 * n_j
    rate_post = (base.rate + 0.5 * within_ss
                 + n_j * (ybar - base.location) ** 2 / (2.0 * denom))
    loc_post = (base.location + base.scale_factor * n_j * ybar) / denom
    sf_post = base.scale_factor / denom
    state.precisions = rng.standard_gamma(shape_post) / rate_post
    state.means = loc_post + rng.standard_normal(phi) * np.sqrt(
        sf_post / state.precisions)
    return state


def _draw_slices(state: MixtureState, rng: np.random.Generator) -> None:
    # u_k ~ Uniform(0, w_{d_k}); the uniform factor is kept away from 0 so the
    # coverage condition below never asks for infinitely many sticks.
    r = np.maximum(rng.random(state.d.shape[0]), 1e-15)
    state.u = r * state.w[state.d]


def _extend_sticks(state: MixtureState, draw_next_v, base: NormalGammaBase,
                   rng: np.random.Generator, max_sticks: int) -> None:
    """Grow the stick until the remaining mass is at most the smallest slice.

    Beyond that point no uninstantiated stick can beat any slice variable, so
    the membership support is complete. ``draw_next_v(v_last, j)`` supplies
    the length variable of new stick index j (0-based); new atoms come from
    the base.
    """
    if state.u.size == 0:
        return
    min_u = float(state.u.min())
    log_min_u = math.log(min_u)
    log_residual = float(np.log1p(-state.v).sum())
    if log_residual <= log_min_u:
        return
    new_v, new_m, new_p, w_tail = [], [], [], []
    v_last = float(state.v[-1])
    residual = math.exp(log_residual)
    while log_residual > log_min_u:
        if state.phi + len(new_v) >= max_sticks:
            raise TruncationError(
                f"slice coverage needed more than {max_sticks} sticks")
        v_next = float(draw_next_v(v_last, state.phi + len(new_v)))
        m, p = _draw_atoms(base, 1, rng)
        new_v.append(v_next)
        new_m.append(float(m[0]))
        new_p.append(float(p[0]))
        w_tail.append(residual * v_next)
        residual *= 1.0 - v_next
        log_residual += math.log1p(-v_next)
        v_last = v_next
    state.v = np.concatenate([state.v, new_v])
    state.w = np.concatenate([state.w, w_tail])
    state.means = np.concatenate([state.means, new_m])
    state.precisions = np.concatenate([state.precisions, new_p])


def _chain_extension_draw(params: BBSBParams, kappa: float,
                          rng: np.random.Generator):
    """Extension rule for the Beta chain: a prior transition from the last
    variable (empty new sticks), or the shared draw in the Geometric regime."""

    def draw(v_last: float, _j: int) -> float:
        if kappa == INFINITY:
            return v_last
        x = int(binomial_rv(rng, int(kappa), v_last))
        return float(beta_rv(rng, params.alpha + x,
                             params.theta + int(kappa) - x))

    return draw


def update_v_u_block(state: MixtureState, params: BBSBParams,
                     base: NormalGammaBase, rng: np.random.Generator,
                     max_sticks: int = DEFAULT_MAX_STICKS) -> MixtureState:
    """Blocked update of the length and slice variables (finite kappa).

    The length variables are drawn sequentially: the first from a Beta
    tilted by its membership counts, each next one from a
    (kappa+1)-component Beta mixture whose component weights combine
    rising-factorial count terms with the Binomial kernel at the previously
    drawn variable. Slice variables then follow uniformly below their
    membership's weight, and the stick is regrown to cover all slices.
    """
    kappa = int(state.kappa)
    counts = CountProfile.from_memberships(state.d, state.phi)
    v = np.empty(state.phi)
    v[0] = beta_rv(rng, params.alpha + counts.assigned[0],
                   params.theta + counts.beyond[0])
    for i in range(state.phi - 1):
        a_cnt = float(counts.assigned[i + 1])
        t_cnt = float(counts.beyond[i + 1])
        if kappa == 0:
            x = 0
        else:
            logits = _kernels.step2_logweights(
                float(v[i]), kappa, params.alpha, params.theta, a_cnt, t_cnt)
            x = categorical_from_logits(rng, logits)
        v[i + 1] = beta_rv(rng, a_cnt + params.alpha + x,
                           t_cnt + params.theta + kappa - x)
    state.v = v
    state.w, _ = _stick_weights(v)
    _draw_slices(state, rng)
    _extend_sticks(state, _chain_extension_draw(params, kappa, rng), base,
                   rng, max_sticks)
    return state


def update_v_u_block_augmented(state: MixtureState, params: BBSBParams,
                               base: NormalGammaBase,
                               rng: np.random.Generator,
                               max_sticks: int = DEFAULT_MAX_STICKS
                               ) -> MixtureState:
    """Exact alternative block built on the explicit latent count chain.

    First each count between consecutive length variables is drawn from its
    discrete conditional, then every length variable is redrawn given its
    adjacent counts and membership counts; at kappa=0 this coincides with
    :func:`update_v_u_block` exactly.
    """
    kappa = int(state.kappa)
    counts = CountProfile.from_memberships(state.d, state.phi)
    phi = state.phi
    v = state.v.copy()
    x = np.zeros(max(phi - 1, 0), dtype=np.int64)
    if kappa > 0:
        for i in range(phi - 1):
            logits = _kernels.pair_logweights(
                float(v[i]), float(v[i + 1]), kappa, params.alpha, params.theta)
            x[i] = categorical_from_logits(rng, logits)
    for i in range(phi):
        x_adj = 0.0
        n_adj = 0
        if i > 0:
            x_adj += x[i - 1]
            n_adj += 1
        if i < phi - 1:
            x_adj += x[i]
            n_adj += 1
        v[i] = beta_rv(rng,
                       params.alpha + x_adj + counts.assigned[i],
                       params.theta + n_adj * kappa - x_adj + counts.beyond[i])
    state.v = v
    state.w, _ = _stick_weights(v)
    _draw_slices(state, rng)
    _extend_sticks(state, _chain_extension_draw(params, kappa, rng), base,
                   rng, max_sticks)
    return state


def update_lambda_u_block(state: MixtureState, params: BBSBParams,
                          base: NormalGammaBase, rng: np.random.Generator,
                          max_sticks: int = DEFAULT_MAX_STICKS
                          ) -> MixtureState:
    """Geometric-regime substitute for the block update.

    With weights lam*(1-lam)^(j-1) the single stick-breaking draw has the
    exact conditional Beta(alpha + n, theta + sum of 0-based memberships).
    """
    n = state.d.shape[0]
    lam = float(beta_rv(rng, params.alpha + n,
                        params.theta + float(state.d.sum())))
    state.v = np.full(state.phi, lam)
    state.w, _ = _stick_weights(state.v)
    _draw_slices(state, rng)
    _extend_sticks(state, _chain_extension_draw(params, INFINITY, rng), base,
                   rng, max_sticks)
    return state


def trim_sticks(state: MixtureState) -> MixtureState:
    """Drop sticks beyond the last occupied one.

    The dropped tail is pure prior given the rest of the state, so removing
    it marginalizes it exactly; it is re-instantiated on demand by the next
    block update. Keeping the state minimal stops prior-generated
    transitions from accumulating in the kappa conditional.
    """
    phi_needed = int(state.d.max()) + 1
    if phi_needed < state.phi:
        state.v = state.v[:phi_needed]
        state.w = state.w[:phi_needed]
        state.means = state.means[:phi_needed]
        state.precisions = state.precisions[:phi_needed]
    return state


def update_memberships(state: MixtureState, data: np.ndarray,
                       rng: np.random.Generator) -> MixtureState:
    """Redraw every membership over the sticks whose weight clears its slice."""
    logpdf = _normal_logpdf_matrix(data, state.means, state.precisions)
    valid = state.w[None, :] > state.u[:, None]
    if not np.all(valid.any(axis=1)):
        raise AssertionError("a slice variable excludes every instantiated "
                             "stick; the truncation invariant is broken")
    logits = np.where(valid, logpdf, -np.inf)
    shifted = logits - logits.max(axis=1, keepdims=True)
    probs = np.exp(shifted)
    cum = np.cumsum(probs, axis=1)
    r = rng.random(data.shape[0]) * cum[:, -1]
    state.d = (cum < r[:, None]).sum(axis=1).astype(np.int64)
    return state


def update_kappa(state: MixtureState, params: BBSBParams,
                 prior_kappa: KappaPrior, rng: np.random.Generator
                 ) -> MixtureState:
    """Draw kappa from its finite-support conditional given the instantiated
    length variables (product over their phi-1 transitions)."""
    logliks = _kernels.kappa_support_logliks(
        state.v, prior_kappa.support, params.alpha, params.theta)
    logits = np.log(prior_kappa.probs) + logliks
    idx = categorical_from_logits(rng, logits)
    state.kappa = int(prior_kappa.support[idx])
    return state


# ---------------------------------------------------------------------------
# posterior summaries


@dataclass
class Histogram:
    """Empirical histogram of a scalar posterior draw (kappa, sigma, ...)."""

    values: np.ndarray
    counts: np.ndarray
    reps: int

    @classmethod
    def from_samples(cls, samples) -> "Histogram":
        samples = np.asarray(samples)
        values, counts = np.unique(samples, return_counts=True)
        return cls(values=values, counts=counts, reps=int(samples.shape[0]))

    def proportions(self) -> np.ndarray:
        return self.counts / self.reps

    def mode(self):
        return self.values[int(np.argmax(self.counts))]

    def mean(self) -> float:
        return float(np.sum(self.values * self.counts) / self.reps)

    def to_csv(self, path, column: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([column, "count", "proportion"])
            for value, count in zip(self.values, self.counts):
                value = int(value) if float(value).is_integer() else float(value)
                writer.writerow([value, int(count),
                                 f"{count / self.reps:.17g}"])


def density_estimate(kept_states, grid: np.ndarray) -> np.ndarray:
    """Posterior mean density on ``grid``.

    For every kept state and observation, the Gaussian kernels of the sticks
    above that observation's slice are averaged; the result is averaged over
    observations and states.
    """
    if not kept_states:
        raise ValueError("need at least one kept state")
    grid = np.asarray(grid, dtype=float)
    total = np.zeros(grid.shape[0])
    for s in kept_states:
        active = s.w[None, :] > s.u[:, None]
        sizes = active.sum(axis=1)
        if not np.all(sizes > 0):
            raise AssertionError("empty slice support in a kept state")
        coef = (active / sizes[:, None]).sum(axis=0) / s.u.shape[0]
        kernels = np.exp(_normal_logpdf_matrix(grid, s.means, s.precisions))
        total += kernels @ coef
    return total / len(kept_states)


def posterior_Kn(kept_states) -> KnHistogram:
    """Histogram of the number of distinct memberships across kept states."""
    if not kept_states:
        raise ValueError("need at least one kept state")
    n = kept_states[0].d.shape[0]
    return KnHistogram.from_samples(
        n, [s.num_groups() for s in kept_states])


def posterior_kappa(kept_states) -> Histogram:
    """Histogram of the dependence parameter across kept states. The
    posterior mode, not the mean, is the headline estimate."""
    if not kept_states:
        raise ValueError("need at least one kept state")
    return Histogram.from_samples([int(s.kappa) for s in kept_states])


@dataclass
class PosteriorSummary:
    """Gibbs output: density on a grid, group-count and parameter histograms,
    and per-iteration diagnostic traces."""

    grid: np.ndarray
    density: np.ndarray
    kn_hist: KnHistogram
    param_hist: Histogram | None
    param_name: str | None
    traces: dict
    n_kept: int

    def to_json(self, path) -> None:
        payload = {
            "grid": [float(x) for x in self.grid],
            "density": [float(x) for x in self.density],
            "kn_hist": {str(m): c for m, c in sorted(self.kn_hist.counts.items())},
            "n_kept": self.n_kept,
        }
        if self.param_hist is not None:
            payload[f"{self.param_name}_hist"] = {
                _format_param(v): int(c)
                for v, c in zip(self.param_hist.values, self.param_hist.counts)
            }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    def write_csvs(self, out_dir) -> None:
        import os

        with open(os.path.join(out_dir, "density.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["grid", "density"])
            for g, f_ in zip(self.grid, self.density):
                writer.writerow([f"{g:.17g}", f"{f_:.17g}"])
        self.kn_hist.to_csv(os.path.join(out_dir, "kn_hist.csv"))
        if self.param_hist is not None:
            self.param_hist.to_csv(
                os.path.join(out_dir, f"{self.param_name}_hist.csv"),
                self.param_name)


def _format_param(value) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else f"{value:.17g}"


# ---------------------------------------------------------------------------
# the sampler


@dataclass(frozen=True)
class GibbsConfig:
    iterations: int
    burn_in: int = 0
    seed: int = 0
    kappa_prior: KappaPrior | None = None
    variant: str = "paper"
    grid: np.ndarray | None = None
    max_sticks: int = DEFAULT_MAX_STICKS
    trace_path: str | None = None

    def __post_init__(self):
        if self.burn_in < 0 or self.iterations <= self.burn_in:
            raise ValueError("need iterations > burn_in >= 0")
        if self.variant not in ("paper", "augmented"):
            raise ValueError(f"unknown variant {self.variant!r}")


def default_grid(data: np.ndarray, points: int = 512) -> np.ndarray:
    spread = 4.0 * float(np.std(data))
    return np.linspace(float(data.min()) - spread,
                       float(data.max()) + spread, points)


def init_state(data: np.ndarray, params: BBSBParams, base: NormalGammaBase,
               rng: np.random.Generator,
               kappa_prior: KappaPrior | None = None) -> MixtureState:
    """All memberships on the first stick, length variables from the prior
    chain, slice variables below the first weight, kappa at the prior mode
    (or the fixed value)."""
    n = data.shape[0]
    kappa = params.kappa if kappa_prior is None else kappa_prior.mode()
    v1 = float(beta_rv(rng, params.alpha, params.theta))
    v = np.array([v1])
    m, p = _draw_atoms(base, 1, rng)
    w, _ = _stick_weights(v)
    d = np.zeros(n, dtype=np.int64)
    state = MixtureState(means=m, precisions=p, v=v, w=w,
                         u=np.empty(n), d=d, kappa=kappa)
    _draw_slices(state, rng)
    return state


def _log_joint(state: MixtureState, data: np.ndarray, params: BBSBParams,
               base: NormalGammaBase) -> float:
    z = (data - state.means[state.d]) * np.sqrt(state.precisions[state.d])
    loglik = float(np.sum(0.5 * (np.log(state.precisions[state.d]) - _LOG_2PI)
                          - 0.5 * z * z))
    p, m = state.precisions, state.means
    log_base = float(np.sum(
        base.shape * math.log(base.rate) - gammaln(base.shape)
        + (base.shape - 1.0) * np.log(p) - base.rate * p
        + 0.5 * (np.log(p / base.scale_factor) - _LOG_2PI)
        - 0.5 * p / base.scale_factor * (m - base.location) ** 2))
    a, t = params.alpha, params.theta
    log_beta_norm = float(gammaln(a + t) - gammaln(a) - gammaln(t))
    if state.kappa == INFINITY:
        lam = float(state.v[0])
        log_chain = (log_beta_norm + (a - 1.0) * math.log(lam)
                     + (t - 1.0) * math.log1p(-lam))
    else:
        v1 = float(state.v[0])
        log_chain = (log_beta_norm + (a - 1.0) * math.log(v1)
                     + (t - 1.0) * math.log1p(-v1)
                     + _kernels.chain_loglik(state.v, int(state.kappa), a, t))
    return loglik + log_base + log_chain


def run_gibbs(data, params: BBSBParams, base: NormalGammaBase,
              config: GibbsConfig) -> PosteriorSummary:
    """Run the sampler and summarize the post-burn-in draws.

    The sweep order is atoms, (V, U) block, memberships, then kappa when a
    prior is supplied. The per-iteration trace records the group count,
    current kappa, truncation level and complete-data log joint.
    """
    data = np.asarray(data, dtype=float)
    if data.size == 0:
        raise ValueError("data must be non-empty")
    if not np.all(np.isfinite(data)):
        raise ValueError("data must be finite")
    if config.kappa_prior is not None and params.is_geometric:
        raise ValueError("random kappa requires a finite-support prior; "
                         "the Geometric regime has no kappa update")
    rng = np.random.default_rng(config.seed)
    state = init_state(data, params, base, rng, config.kappa_prior)
    grid = config.grid if config.grid is not None else default_grid(data)

    traces = {"iteration": [], "K_n": [], "kappa": [], "phi": [],
              "log_joint": []}
    kept: list[MixtureState] = []
    trace_fh = None
    trace_writer = None
    if config.trace_path is not None:
        trace_fh = open(config.trace_path, "a", newline="")
        trace_writer = csv.writer(trace_fh)
        if trace_fh.tell() == 0:
            trace_writer.writerow(["iteration", "K_n", "kappa", "phi",
                                   "log_joint"])
    try:
        for it in range(1, config.iterations + 1):
            update_atoms(state, data, base, rng)
            if state.kappa == INFINITY:
                update_lambda_u_block(state, params, base, rng,
                                      config.max_sticks)
            elif config.variant == "augmented":
                update_v_u_block_augmented(state, params, base, rng,
                                           config.max_sticks)
            else:
                update_v_u_block(state, params, base, rng, config.max_sticks)
            update_memberships(state, data, rng)
            if it > config.burn_in:
                # snapshot before trimming: the density estimate needs every
                # stick whose weight clears some slice
                kept.append(state.snapshot())
            trim_sticks(state)
            if config.kappa_prior is not None:
                update_kappa(state, params, config.kappa_prior, rng)
                if it > config.burn_in:
                    kept[-1].kappa = state.kappa
            k_n = state.num_groups()
            log_joint = _log_joint(state, data, params, base)
            traces["iteration"].append(it)
            traces["K_n"].append(k_n)
            traces["kappa"].append(state.kappa)
            traces["phi"].append(state.phi)
            traces["log_joint"].append(log_joint)
            if trace_writer is not None:
                trace_writer.writerow(
                    [it, k_n, format_kappa(state.kappa), state.phi,
                     f"{log_joint:.17g}"])
    finally:
        if trace_fh is not None:
            trace_fh.close()

    param_hist = None
    param_name = None
    if config.kappa_prior is not None:
        param_hist = posterior_kappa(kept)
        param_name = "kappa"
    return PosteriorSummary(
        grid=grid, density=density_estimate(kept, grid),
        kn_hist=posterior_Kn(kept), param_hist=param_hist,
        param_name=param_name, traces=traces, n_kept=len(kept))
