"""Beta-Binomial stick-breaking priors.

A family of random probability measures whose stick-breaking length
variables follow a Beta-marginal Markov chain. The dependence parameter
interpolates between the Dirichlet process (kappa=0, alpha=1) and the
Geometric process (kappa=INFINITY), and can itself be given a
finite-support prior inside the mixture sampler.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .params import BBSBParams, INFINITY, NormalGammaBase
from .chain import (
    ChainSample,
    conditional_mean,
    conditional_variance,
    lag1_correlation,
    sample_chain,
    stationary_cov,
    step,
    v_transition_density,
    x_stationary_pmf,
    x_transition_pmf,
)
from .stickbreak import (
    KnHistogram,
    StickWeights,
    TruncationError,
    extend_until,
    prob_decreasing,
    sample_Kn,
    stick_break,
)
from .mixture import (
    GibbsConfig,
    KappaPrior,
    MixtureState,
    PosteriorSummary,
    density_estimate,
    posterior_Kn,
    posterior_kappa,
    run_gibbs,
)
from .baselines import PitmanYorParams, run_pitman_yor
from .data import Dataset, GaussianMixtureSpec, builtin_database, generate

__version__ = "0.1.0"
