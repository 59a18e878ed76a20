#include "tpais/proposal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tpais/errors.hpp"

namespace tpais {

std::string_view to_string(Kernel kernel) {
  return kernel == Kernel::Uniform ? "uniform" : "gaussian";
}

Kernel parse_kernel(std::string_view name) {
  if (name == "uniform") return Kernel::Uniform;
  if (name == "gaussian") return Kernel::Gaussian;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

double component_density(const Node& leaf, std::span<const double> x, Kernel kernel) {
  const auto dims = static_cast<double>(leaf.center.size());
  if (kernel == Kernel::Uniform) {
    return leaf.contains(x) ? 1.0 / std::pow(2.0 * leaf.radius, dims) : 0.0;
  }
  double sq = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double z = (x[d] - leaf.center[d]) / leaf.radius;
    sq += z * z;
  }
  const double log_norm = -dims * (std::log(leaf.radius) + 0.5 * std::log(2.0 * std::numbers::pi));
  return std::exp(log_norm - 0.5 * sq);
}

Point sample_leaf(const Node& leaf, Kernel kernel, Rng& rng) {
  const std::size_t dims = leaf.center.size();
  Point x(dims);
  if (kernel == Kernel::Uniform) {
    for (std::size_t d = 0; d < dims; ++d) {
      const double lo = leaf.lower[d];
      const double hi = leaf.upper[d];
      double v = lo + (hi - lo) * rng.uniform();
      if (v >= hi) v = std::nextafter(hi, lo);  // rounding can land on the open face
      x[d] = v;
    }
  } else {
    for (std::size_t d = 0; d < dims; ++d) x[d] = rng.normal(leaf.center[d], leaf.radius);
  }
  return x;
}

double ProposalDistribution::density(std::span<const double> x) const {
  const auto leaves = tree_->leaves();
  const auto count = static_cast<double>(leaves.size());
  if (kernel_ == Kernel::Uniform) {
    // Leaves partition the domain, so only the containing leaf contributes.
    const auto id = tree_->locate(x);
    return id ? component_density(tree_->node(*id), x, kernel_) / count : 0.0;
  }
  double sum = 0.0;
  for (NodeId id : leaves) sum += component_density(tree_->node(id), x, kernel_);
  return sum / count;
}

Point ProposalDistribution::sample(Rng& rng) const {
  const auto leaves = tree_->leaves();
  auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(leaves.size()));
  if (pick >= leaves.size()) pick = leaves.size() - 1;
  return sample_leaf(tree_->node(leaves[pick]), kernel_, rng);
}

MixtureWeights mixture_weights(const TreePyramid& tree) {
  const auto leaves = tree.leaves();
  const auto dims = static_cast<double>(tree.dims());
  MixtureWeights out;
  out.values.reserve(leaves.size());
  double total = 0.0;
  for (NodeId id : leaves) {
    const Node& n = tree.node(id);
    const double w = n.weight.value_or(0.0);
    const double v = w > 0.0 ? w * std::pow(n.radius, dims) : 0.0;
    out.values.push_back(v);
    total += v;
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw SamplingError("degenerate mixture");
  for (double& v : out.values) v /= total;
  return out;
}

std::size_t select_component(const MixtureWeights& weights, double alpha) {
  const auto& w = weights.values;
  if (w.empty()) throw std::invalid_argument("select_component: empty weights");
  double cumulative = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    cumulative += w[i];
    if (cumulative >= alpha && w[i] > 0.0) return i;
  }
  // Rounding left the total just below alpha: take the last positive weight.
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] > 0.0) return i;
  }
  return w.size() - 1;
}

std::size_t sample_mixture(const MixtureWeights& weights, Rng& rng) {
  return select_component(weights, rng.uniform());
}

}  // namespace tpais
