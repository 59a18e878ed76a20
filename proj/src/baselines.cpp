#include "tpais/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tpais/errors.hpp"

namespace tpais {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_target(const TargetDensity& target, std::span<const double> x) {
  if (!target.bounds.contains(x)) return kNegInf;
  const double v = target.log_density(x);
  if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
    throw SamplingError("target returned a non-finite log density");
  }
  return v;
}

double isotropic_log_density(std::span<const double> x, std::span<const double> mean, double std) {
  double sq = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double z = (x[d] - mean[d]) / std;
    sq += z * z;
  }
  const auto dims = static_cast<double>(x.size());
  return -0.5 * sq - dims * (std::log(std) + 0.5 * kLogTwoPi);
}

double log_sum_exp(std::span<const double> v) {
  double best = kNegInf;
  for (double t : v) best = std::max(best, t);
  if (!std::isfinite(best)) return best;
  double sum = 0.0;
  for (double t : v) sum += std::exp(t - best);
  return best + std::log(sum);
}

}  // namespace

MHResult run_mh(const TargetDensity& target, const MHConfig& config) {
  if (!(config.proposal_std > 0.0)) throw std::invalid_argument("mh: proposal_std must be > 0");
  if (config.initial_point.size() != target.dims()) {
    throw std::invalid_argument("mh: initial point dimension mismatch");
  }
  Point current = config.initial_point;
  double current_log = log_target(target, current);
  if (current_log == kNegInf) throw SamplingError("mh: initial point has zero target density");

  Rng rng(config.seed);
  MHResult result;
  result.chain.reserve(config.n_samples);
  std::size_t accepted = 0;
  std::size_t proposed = 0;
  Point candidate(current.size());
  const std::size_t total = config.burn_in + config.n_samples;
  for (std::size_t step = 0; step < total; ++step) {
    for (std::size_t d = 0; d < current.size(); ++d) {
      candidate[d] = current[d] + config.proposal_std * rng.normal();
    }
    // Draw alpha unconditionally so the random stream does not depend on the outcome.
    const double alpha = rng.uniform();
    const double cand_log = log_target(target, candidate);
    ++proposed;
    if (cand_log >= current_log || std::log(alpha) < cand_log - current_log) {
      current.swap(candidate);
      current_log = cand_log;
      ++accepted;
    }
    if (step >= config.burn_in) result.chain.push_back(current);
  }
  result.acceptance_rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  return result;
}

double PMCProposal::density(std::span<const double> x) const {
  if (locations.empty()) return 0.0;
  double sum = 0.0;
  for (const Point& mu : locations) sum += std::exp(isotropic_log_density(x, mu, kernel_std));
  return sum / static_cast<double>(locations.size());
}

PMCResult run_pmc(const TargetDensity& target, const PMCConfig& config) {
  if (config.population_size < 1) throw std::invalid_argument("pmc: population_size must be >= 1");
  if (config.iterations < 1) throw std::invalid_argument("pmc: iterations must be >= 1");
  if (!(config.kernel_std > 0.0)) throw std::invalid_argument("pmc: kernel_std must be > 0");

  const std::size_t pop = config.population_size;
  const std::size_t dims = target.dims();
  Rng rng(config.seed);

  std::vector<Point> locations(pop, Point(dims));
  for (Point& mu : locations) {
    for (std::size_t d = 0; d < dims; ++d) {
      mu[d] = rng.uniform(target.bounds.lower[d], target.bounds.upper[d]);
    }
  }

  PMCResult result;
  result.set.samples.reserve(pop * config.iterations);
  result.set.weights.reserve(pop * config.iterations);
  std::vector<Point> draws(pop, Point(dims));
  std::vector<double> log_w(pop);
  std::vector<double> terms(pop);
  std::vector<double> cdf(pop);

  for (std::size_t it = 0; it < config.iterations; ++it) {
    for (std::size_t j = 0; j < pop; ++j) {
      for (std::size_t d = 0; d < dims; ++d) {
        draws[j][d] = rng.normal(locations[j][d], config.kernel_std);
      }
    }
    for (std::size_t j = 0; j < pop; ++j) {
      const double lp = log_target(target, draws[j]);
      double lq;
      if (config.weighting == Weighting::Standard) {
        lq = isotropic_log_density(draws[j], locations[j], config.kernel_std);
      } else {
        for (std::size_t k = 0; k < pop; ++k) {
          terms[k] = isotropic_log_density(draws[j], locations[k], config.kernel_std);
        }
        lq = log_sum_exp(terms) - std::log(static_cast<double>(pop));
      }
      log_w[j] = lp - lq;
      result.set.samples.push_back(draws[j]);
      result.set.weights.push_back(std::exp(log_w[j]));
    }

    const double norm = log_sum_exp(log_w);
    if (!std::isfinite(norm)) throw SamplingError("population collapse");
    double acc = 0.0;
    for (std::size_t j = 0; j < pop; ++j) {
      acc += std::exp(log_w[j] - norm);
      cdf[j] = acc;
    }
    std::vector<Point> next(pop);
    for (std::size_t j = 0; j < pop; ++j) {
      const double alpha = rng.uniform() * acc;
      auto pos = std::upper_bound(cdf.begin(), cdf.end(), alpha);
      std::size_t pick = static_cast<std::size_t>(pos - cdf.begin());
      if (pos == cdf.end()) {
        pick = pop - 1;
        while (log_w[pick] == kNegInf) --pick;  // norm is finite, so one exists
      }
      next[j] = draws[pick];
    }
    locations = std::move(next);
  }

  result.proposal = PMCProposal{std::move(locations), config.kernel_std};
  return result;
}

}  // namespace tpais
