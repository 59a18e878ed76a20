#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "tpais/random.hpp"
#include "tpais/tree_pyramid.hpp"

namespace tpais {

enum class Kernel { Uniform, Gaussian };

std::string_view to_string(Kernel kernel);
Kernel parse_kernel(std::string_view name);

/// Density of one leaf's mixture component at x.
///
/// Uniform: 1/(2r)^K inside the cell, 0 outside. Gaussian: isotropic normal
/// centred on the cell with standard deviation r in every dimension.
double component_density(const Node& leaf, std::span<const double> x, Kernel kernel);

/// Draw from a leaf's component. Gaussian draws are not truncated to the cell.
Point sample_leaf(const Node& leaf, Kernel kernel, Rng& rng);

/// Equal-weight mixture over the leaves of a tree pyramid. Holds a pointer to
/// the tree, so the tree must outlive it.
class ProposalDistribution {
 public:
  ProposalDistribution(const TreePyramid& tree, Kernel kernel) : tree_(&tree), kernel_(kernel) {}

  const TreePyramid& tree() const { return *tree_; }
  Kernel kernel() const { return kernel_; }

  /// (1/|leaves|) * sum of component densities.
  double density(std::span<const double> x) const;

  /// Pick a leaf uniformly, then draw from its component.
  Point sample(Rng& rng) const;

 private:
  const TreePyramid* tree_;
  Kernel kernel_;
};

struct MixtureWeights {
  std::vector<double> values;  // aligned with tree.leaves()
};

/// Normalized importance volume w_i * r_i^K of each leaf. Leaves without a
/// weight contribute 0. Throws SamplingError("degenerate mixture") when no
/// leaf has a positive weight.
MixtureWeights mixture_weights(const TreePyramid& tree);

/// Smallest index whose cumulative weight reaches alpha.
std::size_t select_component(const MixtureWeights& weights, double alpha);

std::size_t sample_mixture(const MixtureWeights& weights, Rng& rng);

}  // namespace tpais
