"""Tree-pyramid adaptive importance sampling (C++ core)."""

from ._core import (
    GaussianMixture,
    SamplingError,
    Target,
    TpAisSampler,
    ess_is,
    ess_mcmc,
    evidence_estimate,
    jsd,
    kde_density,
    make_target,
    normalized_ess,
    run_experiments,
    run_mh,
    run_pmc,
)

__all__ = [
    "GaussianMixture",
    "SamplingError",
    "Target",
    "TpAisSampler",
    "ess_is",
    "ess_mcmc",
    "evidence_estimate",
    "jsd",
    "kde_density",
    "make_target",
    "normalized_ess",
    "run_experiments",
    "run_mh",
    "run_pmc",
]
