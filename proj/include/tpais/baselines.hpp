#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tpais/sampler.hpp"
#include "tpais/targets.hpp"

namespace tpais {

struct MHConfig {
  double proposal_std = 0.1;
  std::size_t n_samples = 1000;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
  Point initial_point;
};

struct MHResult {
  std::vector<Point> chain;
  double acceptance_rate = 0.0;
};

/// Random-walk Metropolis-Hastings with isotropic Gaussian steps. Proposals
/// outside the target's bounds are rejected. Works in log space.
MHResult run_mh(const TargetDensity& target, const MHConfig& config);

struct PMCConfig {
  std::size_t population_size = 100;
  std::size_t iterations = 10;
  double kernel_std = 0.1;
  Weighting weighting = Weighting::Standard;
  std::uint64_t seed = 0;
};

/// Final population of Gaussian kernels; its equal-weight mixture is the
/// adapted proposal.
struct PMCProposal {
  std::vector<Point> locations;
  double kernel_std = 0.1;

  double density(std::span<const double> x) const;
};

struct PMCResult {
  WeightedSampleSet set;  // all iterations, in draw order
  PMCProposal proposal;
};

/// Population Monte Carlo: each iteration draws one sample per kernel,
/// weights it (per-kernel or full-mixture denominator), and multinomially
/// resamples the kernel locations from the normalized weights. Samples
/// falling outside the bounds get weight 0.
PMCResult run_pmc(const TargetDensity& target, const PMCConfig& config);

}  // namespace tpais
