"""Pitman-Yor slice-Gibbs mixture used as a comparison model.

The stick-breaking representation has independent length variables
v_i ~ Beta(1 - sigma, theta + i*sigma), 0 <= sigma < 1, theta > -sigma;
sigma = 0 recovers the Dirichlet process. The atom, slice and membership
machinery is shared with :mod:`bbsb.mixture`; the discount sigma is updated
over a discrete grid, mirroring the finite-support treatment of the
dependence parameter in the main model.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .mixture import (
    GibbsConfig,
    Histogram,
    MixtureState,
    CountProfile,
    PosteriorSummary,
    _LOG_2PI,
    _draw_atoms,
    _draw_slices,
    _extend_sticks,
    _stick_weights,
    default_grid,
    density_estimate,
    posterior_Kn,
    trim_sticks,
    update_atoms,
    update_memberships,
)
from .params import NormalGammaBase
from .sampling import beta_rv, categorical_from_logits
from .stickbreak import DEFAULT_MAX_STICKS


@dataclass(frozen=True)
class PitmanYorParams:
    sigma: float
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.sigma < 1.0):
            raise ValueError(f"sigma must lie in [0, 1), got {self.sigma}")
        if not self.theta > -self.sigma:
            raise ValueError(
                f"theta must exceed -sigma, got theta={self.theta}, "
                f"sigma={self.sigma}")


def default_sigma_grid(points: int = 201, high: float = 0.995) -> np.ndarray:
    """Equispaced grid on [0, high] used as the discrete sigma posterior
    support (the model itself requires sigma < 1)."""
    return np.linspace(0.0, high, points)


def _py_extension_draw(params: PitmanYorParams, rng: np.random.Generator):
    def draw(_v_last: float, j: int) -> float:
        # stick number j+1 (j is the 0-based index of the new stick)
        return float(beta_rv(rng, 1.0 - params.sigma,
                             params.theta + (j + 1) * params.sigma))

    return draw


def py_update_v_u(state: MixtureState, params: PitmanYorParams,
                  base: NormalGammaBase, rng: np.random.Generator,
                  max_sticks: int = DEFAULT_MAX_STICKS) -> MixtureState:
    """Independent count-tilted Beta draws for every instantiated stick, then
    slice variables and stick regrowth as in the main sampler."""
    counts = CountProfile.from_memberships(state.d, state.phi)
    v = np.empty(state.phi)
    for i in range(state.phi):
        v[i] = beta_rv(rng,
                       1.0 - params.sigma + counts.assigned[i],
                       params.theta + (i + 1) * params.sigma + counts.beyond[i])
    state.v = v
    state.w, _ = _stick_weights(v)
    _draw_slices(state, rng)
    _extend_sticks(state, _py_extension_draw(params, rng), base, rng,
                   max_sticks)
    return state


def _sigma_grid_logliks(v: np.ndarray, theta: float,
                        grid: np.ndarray) -> np.ndarray:
    """Log likelihood of the instantiated length variables at every grid
    value of the discount."""
    i = np.arange(1, v.shape[0] + 1, dtype=float)
    a = 1.0 - grid
    b = theta + np.outer(grid, i)
    lv = np.log(v)
    l1v = np.log1p(-v)
    terms = (gammaln(a[:, None] + b) - gammaln(a)[:, None] - gammaln(b)
             + (a[:, None] - 1.0) * lv[None, :] + (b - 1.0) * l1v[None, :])
    return terms.sum(axis=1)


def py_update_sigma(state: MixtureState, params: PitmanYorParams,
                    grid: np.ndarray, rng: np.random.Generator
                    ) -> PitmanYorParams:
    """Categorical draw of the discount over its grid; grid points breaking
    theta > -sigma are excluded. A one-point grid is returned unchanged."""
    grid = np.asarray(grid, dtype=float)
    valid = grid > -params.theta
    grid = grid[valid]
    if grid.shape[0] == 0:
        raise ValueError("no admissible sigma grid point for this theta")
    if grid.shape[0] == 1:
        return PitmanYorParams(sigma=float(grid[0]), theta=params.theta)
    logliks = _sigma_grid_logliks(state.v, params.theta, grid)
    idx = categorical_from_logits(rng, logliks)
    return PitmanYorParams(sigma=float(grid[idx]), theta=params.theta)


def _py_log_joint(state: MixtureState, data: np.ndarray,
                  params: PitmanYorParams, base: NormalGammaBase) -> float:
    z = (data - state.means[state.d]) * np.sqrt(state.precisions[state.d])
    loglik = float(np.sum(0.5 * (np.log(state.precisions[state.d]) - _LOG_2PI)
                          - 0.5 * z * z))
    p, m = state.precisions, state.means
    log_base = float(np.sum(
        base.shape * math.log(base.rate) - gammaln(base.shape)
        + (base.shape - 1.0) * np.log(p) - base.rate * p
        + 0.5 * (np.log(p / base.scale_factor) - _LOG_2PI)
        - 0.5 * p / base.scale_factor * (m - base.location) ** 2))
    i = np.arange(1, state.phi + 1, dtype=float)
    a = 1.0 - params.sigma
    b = params.theta + i * params.sigma
    log_prior_v = float(np.sum(
        gammaln(a + b) - gammaln(a) - gammaln(b)
        + (a - 1.0) * np.log(state.v) + (b - 1.0) * np.log1p(-state.v)))
    return loglik + log_base + log_prior_v


def run_pitman_yor(data, params: PitmanYorParams, base: NormalGammaBase,
                   config: GibbsConfig,
                   sigma_grid: np.ndarray | None = None) -> PosteriorSummary:
    """Run the Pitman-Yor sampler; pass ``sigma_grid`` to make the discount
    random (posterior histogram reported under the name "sigma")."""
    data = np.asarray(data, dtype=float)
    if data.size == 0:
        raise ValueError("data must be non-empty")
    if not np.all(np.isfinite(data)):
        raise ValueError("data must be finite")
    if config.kappa_prior is not None:
        raise ValueError("kappa priors do not apply to the Pitman-Yor model")
    rng = np.random.default_rng(config.seed)
    grid = config.grid if config.grid is not None else default_grid(data)

    n = data.shape[0]
    v1 = float(beta_rv(rng, 1.0 - params.sigma, params.theta + params.sigma))
    v = np.array([v1])
    m, p = _draw_atoms(base, 1, rng)
    w, _ = _stick_weights(v)
    state = MixtureState(means=m, precisions=p, v=v, w=w, u=np.empty(n),
                         d=np.zeros(n, dtype=np.int64), kappa=0)
    _draw_slices(state, rng)

    traces = {"iteration": [], "K_n": [], "sigma": [], "phi": [],
              "log_joint": []}
    kept: list[MixtureState] = []
    sigma_draws: list[float] = []
    trace_fh = None
    trace_writer = None
    if config.trace_path is not None:
        trace_fh = open(config.trace_path, "a", newline="")
        trace_writer = csv.writer(trace_fh)
        if trace_fh.tell() == 0:
            trace_writer.writerow(["iteration", "K_n", "sigma", "phi",
                                   "log_joint"])
    try:
        for it in range(1, config.iterations + 1):
            update_atoms(state, data, base, rng)
            py_update_v_u(state, params, base, rng, config.max_sticks)
            update_memberships(state, data, rng)
            if it > config.burn_in:
                kept.append(state.snapshot())
            trim_sticks(state)
            if sigma_grid is not None:
                params = py_update_sigma(state, params, sigma_grid, rng)
            if it > config.burn_in:
                sigma_draws.append(params.sigma)
            k_n = state.num_groups()
            log_joint = _py_log_joint(state, data, params, base)
            traces["iteration"].append(it)
            traces["K_n"].append(k_n)
            traces["sigma"].append(params.sigma)
            traces["phi"].append(state.phi)
            traces["log_joint"].append(log_joint)
            if trace_writer is not None:
                trace_writer.writerow([it, k_n, f"{params.sigma:.17g}",
                                       state.phi, f"{log_joint:.17g}"])
    finally:
        if trace_fh is not None:
            trace_fh.close()

    param_hist = None
    param_name = None
    if sigma_grid is not None:
        param_hist = Histogram.from_samples(sigma_draws)
        param_name = "sigma"
    return PosteriorSummary(
        grid=grid, density=density_estimate(kept, grid),
        kn_hist=posterior_Kn(kept), param_hist=param_hist,
        param_name=param_name, traces=traces, n_kept=len(kept))
