#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tpais/random.hpp"
#include "tpais/tree_pyramid.hpp"

namespace tpais {

/// Gaussian mixture with diagonal covariances.
struct GaussianMixture {
  std::vector<Point> means;
  std::vector<Point> variances;  // diagonal of each covariance
  std::vector<double> weights;   // sum to 1

  std::size_t dims() const { return means.empty() ? 0 : means.front().size(); }
  std::size_t components() const { return means.size(); }

  /// Throws std::invalid_argument on shape mismatch, non-positive variances
  /// or weights that do not sum to 1 within 1e-12.
  void validate() const;
};

/// Exact mixture density, including the full normal normalization constant.
double gmm_density(const GaussianMixture& m, std::span<const double> x);
double gmm_log_density(const GaussianMixture& m, std::span<const double> x);
Point gmm_sample(const GaussianMixture& m, Rng& rng);

/// Probability mass of the mixture inside an axis-aligned box.
double gmm_mass_in(const GaussianMixture& m, const DomainBounds& box);

using DensityFn = std::function<double(std::span<const double>)>;

/// Unnormalized or normalized target density on a bounded domain.
struct TargetDensity {
  DensityFn evaluate;
  /// Optional; samplers fall back to log(evaluate(x)) when empty.
  DensityFn log_evaluate;
  DomainBounds bounds;
  std::optional<GaussianMixture> true_model;

  std::size_t dims() const { return bounds.dims(); }
  double log_density(std::span<const double> x) const;
};

/// Wraps a mixture with a precomputed evaluator for both density and log-density.
TargetDensity make_gmm_target(GaussianMixture model, DomainBounds bounds);

enum class TargetFamily { Normal, Gmm5, Egg };

std::string_view to_string(TargetFamily family);
TargetFamily parse_family(std::string_view name);

/// One component, mean ~ U(-1,1)^K, per-dimension std ~ U(0.01, 0.05).
TargetDensity make_normal_target(Rng& rng, std::size_t dims);
/// Five equally weighted components, mean ~ U(-1,1)^K, diagonal variances ~ U(0.01, 0.05).
TargetDensity make_gmm5_target(Rng& rng, std::size_t dims);

inline constexpr std::size_t kEggMaxDims = 7;
/// 4^K equally weighted modes on the grid {-0.6, -0.2, 0.2, 0.6}^K, variance 0.01.
TargetDensity make_egg_target(std::size_t dims);

TargetDensity make_target(TargetFamily family, std::size_t dims, std::uint64_t seed);

/// Single-line textual form of a mixture, for logging generated targets.
std::string describe(const GaussianMixture& m);

}  // namespace tpais
