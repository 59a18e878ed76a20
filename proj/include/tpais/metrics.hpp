#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tpais/random.hpp"
#include "tpais/targets.hpp"
#include "tpais/tree_pyramid.hpp"

namespace tpais {

/// 1 / sum(w_bar^2) with w_bar the normalized weights. Throws SamplingError
/// when no weight is positive.
double ess_is(std::span<const double> weights);

/// ess_is / N.
double normalized_ess(std::span<const double> weights);

/// Autocorrelation-based ESS of a Markov chain: N / (1 + 2 sum rho(i)), with
/// the lag sum truncated at the first pair rho(2k) + rho(2k+1) <= 0 and the
/// result clamped to [1, N]. Multivariate chains report the smallest
/// per-dimension ESS. Throws SamplingError when a coordinate is constant.
double ess_mcmc(std::span<const Point> chain);

/// Monte Carlo KL(p || q) over uniform draws on the bounds, scaled by the
/// domain volume. 0 log(0/q) = 0; p > 0 with q = 0 gives +infinity.
double kl_mc(const DensityFn& p, const DensityFn& q, const DomainBounds& bounds, std::size_t n,
             Rng& rng);

/// Jensen-Shannon divergence estimated on one shared set of uniform points.
/// Symmetric in (p, q) bit-for-bit.
double jsd(const DensityFn& p, const DensityFn& q, const DomainBounds& bounds, std::size_t n,
           Rng& rng);

/// Same estimator on caller-supplied points (uniform on bounds).
double jsd_on_points(const DensityFn& p, const DensityFn& q, std::span<const Point> points,
                     double volume);

inline constexpr double kDefaultKdeBandwidth = 0.05;

/// Gaussian product-kernel density estimate.
class KdeModel {
 public:
  KdeModel(std::vector<Point> points, double bandwidth);

  double density(std::span<const double> x) const;
  double bandwidth() const { return bandwidth_; }
  std::size_t dims() const { return dims_; }
  std::size_t size() const { return points_.size() / dims_; }

 private:
  std::vector<double> points_;  // row-major
  double bandwidth_;
  std::size_t dims_;
  double log_norm_;
};

KdeModel kde_fit(std::vector<Point> points, double bandwidth = kDefaultKdeBandwidth);

/// Mean of raw importance weights.
double evidence_estimate(std::span<const double> weights);

/// Mean squared deviation of evidence estimates from the true evidence.
double evidence_mse(std::span<const double> estimates, double true_z = 1.0);

/// Self-normalized importance sampling estimate of E_pi[f].
double expectation_estimate(const std::function<double(std::span<const double>)>& f,
                            std::span<const Point> samples, std::span<const double> weights);

struct MetricsReport {
  std::size_t n_samples = 0;
  double ness = 0.0;
  double jsd = 0.0;
  double evidence_mse = 0.0;
  double wall_time_seconds = 0.0;
};

}  // namespace tpais
