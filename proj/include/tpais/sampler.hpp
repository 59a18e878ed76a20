#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tpais/proposal.hpp"
#include "tpais/random.hpp"
#include "tpais/targets.hpp"
#include "tpais/tree_pyramid.hpp"

namespace tpais {

enum class Weighting { Standard, DeterministicMixture };
enum class NodeSelection { MaxEvidence, MixtureDraw };

std::string_view to_string(Weighting w);
std::string_view to_string(NodeSelection s);

struct SamplerConfig {
  std::size_t dims = 1;
  std::size_t n_samples = 1;
  DomainBounds bounds;
  Kernel kernel = Kernel::Uniform;
  Weighting weighting = Weighting::Standard;
  NodeSelection node_selection = NodeSelection::MaxEvidence;
  bool resample_leaves = false;
  std::uint64_t seed = 0;
  int max_depth = TreePyramid::kDefaultMaxDepth;

  void validate() const;
};

struct WeightedSampleSet {
  std::vector<Point> samples;
  std::vector<double> weights;

  std::size_t size() const { return samples.size(); }
};

/// pi(x) / Q_i(x) for the component that generated x.
double standard_weight(double target_density, double component_density);

/// pi(x) / Q(x) against the full current mixture.
double dm_weight(double target_density, const ProposalDistribution& q, std::span<const double> x);

/// Tree-pyramid adaptive importance sampler.
///
/// Construction draws the root sample; each step() expands one leaf and
/// samples its 2^K children. The sampler can be stopped after any step: the
/// tree and the weighted set returned by samples() are always consistent
/// (one sample per leaf).
class TpAisSampler {
 public:
  TpAisSampler(TargetDensity target, SamplerConfig config);

  /// True once the number of leaves (= returned samples) reaches n_samples.
  bool done() const { return tree_.leaf_count() >= config_.n_samples; }

  /// One iteration: optional leaf resampling, node selection, expansion and
  /// sampling/weighting of the new leaves. Returns the expanded node.
  NodeId step();

  /// Steps until done().
  void run();

  const TreePyramid& tree() const { return tree_; }
  const SamplerConfig& config() const { return config_; }
  ProposalDistribution proposal() const { return {tree_, config_.kernel}; }

  /// Leaf samples and weights in leaf order. Deterministic-mixture weights are
  /// re-evaluated against the current leaf set.
  WeightedSampleSet samples() const;

  /// pi(x_i) / Q(x_i) against the current mixture, aligned with samples().
  /// The mean of these is the evidence estimate for either weighting scheme.
  std::vector<double> mixture_weights_at_samples() const;

  std::size_t target_evaluations() const { return target_evaluations_; }
  const std::vector<NodeId>& expansion_history() const { return history_; }

 private:
  void draw(NodeId id);
  void reweight(NodeId id);
  NodeId select();

  TargetDensity target_;
  SamplerConfig config_;
  TreePyramid tree_;
  Rng rng_;
  std::size_t target_evaluations_ = 0;
  std::vector<NodeId> history_;
};

struct TpAisResult {
  WeightedSampleSet set;
  TreePyramid tree;
  std::vector<double> evidence_weights;
  std::vector<NodeId> expansions;
  std::size_t target_evaluations = 0;
};

/// Runs the sampler to completion.
TpAisResult run_tp_ais(const TargetDensity& target, const SamplerConfig& config);

}  // namespace tpais
