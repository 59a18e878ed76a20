#include "tpais/sampler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tpais/errors.hpp"

namespace tpais {

std::string_view to_string(Weighting w) {
  return w == Weighting::Standard ? "standard" : "dm";
}

std::string_view to_string(NodeSelection s) {
  return s == NodeSelection::MaxEvidence ? "max-evidence" : "mixture";
}

void SamplerConfig::validate() const {
  if (n_samples < 1) throw std::invalid_argument("sampler: n_samples must be >= 1");
  if (dims < 1) throw std::invalid_argument("sampler: dims must be >= 1");
  bounds.validate();
  if (bounds.dims() != dims) throw std::invalid_argument("sampler: bounds dimension mismatch");
}

double standard_weight(double target_density, double component_density) {
  if (!(component_density > 0.0)) {
    throw SamplingError("standard weight: sample lies outside its component's support");
  }
  return target_density / component_density;
}

double dm_weight(double target_density, const ProposalDistribution& q, std::span<const double> x) {
  const double mix = q.density(x);
  if (!(mix > 0.0)) throw SamplingError("dm weight: mixture density is zero at the sample");
  return target_density / mix;
}

TpAisSampler::TpAisSampler(TargetDensity target, SamplerConfig config)
    : target_(std::move(target)),
      config_((config.validate(), std::move(config))),
      tree_(config_.bounds, config_.dims, config_.max_depth),
      rng_(config_.seed) {
  if (!target_.evaluate && !target_.log_evaluate) {
    throw std::invalid_argument("sampler: target has no density function");
  }
  draw(tree_.root());
  reweight(tree_.root());
}

void TpAisSampler::draw(NodeId id) {
  Node& n = tree_.node(id);
  Point x = sample_leaf(n, config_.kernel, rng_);
  double log_pi;
  if (target_.log_evaluate) {
    log_pi = target_.log_evaluate(x);
    if (std::isnan(log_pi) || log_pi == std::numeric_limits<double>::infinity()) {
      throw SamplingError("target returned a non-finite log density");
    }
  } else {
    const double pi = target_.evaluate(x);
    if (!std::isfinite(pi) || pi < 0.0) {
      throw SamplingError("target returned a negative or non-finite density");
    }
    log_pi = std::log(pi);
  }
  ++target_evaluations_;
  n.sample = std::move(x);
  n.log_target = log_pi;
}

void TpAisSampler::reweight(NodeId id) {
  Node& n = tree_.node(id);
  const double pi = std::exp(n.log_target);
  if (config_.weighting == Weighting::Standard) {
    n.weight = standard_weight(pi, component_density(n, *n.sample, config_.kernel));
  } else {
    n.weight = dm_weight(pi, proposal(), *n.sample);
  }
}

NodeId TpAisSampler::select() {
  const auto leaves = tree_.leaves();
  if (config_.node_selection == NodeSelection::MaxEvidence) {
    // argmax pi(x_n) r_n^K in log space; strict '>' keeps the earliest leaf on ties.
    const auto dims = static_cast<double>(config_.dims);
    NodeId best = leaves.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (NodeId id : leaves) {
      const Node& n = tree_.node(id);
      const double score = n.log_target + dims * std::log(n.radius);
      if (score > best_score) {
        best_score = score;
        best = id;
      }
    }
    return best;
  }

  if (config_.weighting == Weighting::DeterministicMixture) {
    // Stored DM weights were taken against older leaf sets; bring them to the current one.
    for (NodeId id : leaves) reweight(id);
  }
  MixtureWeights weights;
  try {
    weights = mixture_weights(tree_);
  } catch (const SamplingError&) {
    // No leaf has seen positive target mass yet: fall back to cell volume.
    weights.values.clear();
    double total = 0.0;
    for (NodeId id : leaves) {
      const double v = tree_.node(id).volume();
      weights.values.push_back(v);
      total += v;
    }
    for (double& v : weights.values) v /= total;
  }
  return leaves[sample_mixture(weights, rng_)];
}

NodeId TpAisSampler::step() {
  if (config_.resample_leaves) {
    const std::vector<NodeId> current(tree_.leaves().begin(), tree_.leaves().end());
    for (NodeId id : current) draw(id);
    for (NodeId id : current) reweight(id);
  }
  const NodeId chosen = select();
  const std::vector<NodeId> children = tree_.expand(chosen);
  for (NodeId id : children) draw(id);
  for (NodeId id : children) reweight(id);
  history_.push_back(chosen);
  return chosen;
}

void TpAisSampler::run() {
  while (!done()) step();
}

WeightedSampleSet TpAisSampler::samples() const {
  WeightedSampleSet out;
  const auto leaves = tree_.leaves();
  out.samples.reserve(leaves.size());
  out.weights.reserve(leaves.size());
  const ProposalDistribution q = proposal();
  for (NodeId id : leaves) {
    const Node& n = tree_.node(id);
    out.samples.push_back(*n.sample);
    if (config_.weighting == Weighting::DeterministicMixture) {
      out.weights.push_back(dm_weight(std::exp(n.log_target), q, *n.sample));
    } else {
      out.weights.push_back(*n.weight);
    }
  }
  return out;
}

std::vector<double> TpAisSampler::mixture_weights_at_samples() const {
  std::vector<double> out;
  const ProposalDistribution q = proposal();
  for (NodeId id : tree_.leaves()) {
    const Node& n = tree_.node(id);
    out.push_back(dm_weight(std::exp(n.log_target), q, *n.sample));
  }
  return out;
}

TpAisResult run_tp_ais(const TargetDensity& target, const SamplerConfig& config) {
  TpAisSampler sampler(target, config);
  sampler.run();
  TpAisResult result{sampler.samples(), sampler.tree(), sampler.mixture_weights_at_samples(),
                     sampler.expansion_history(), sampler.target_evaluations()};
  return result;
}

}  // namespace tpais
