#include "tpais/targets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tpais {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

double component_log_density(const Point& mean, const Point& var, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double diff = x[d] - mean[d];
    acc += diff * diff / var[d] + std::log(var[d]) + kLogTwoPi;
  }
  return -0.5 * acc;
}

/// Precomputed per-component constants; shared between copies of a target.
class GmmEvaluator {
 public:
  explicit GmmEvaluator(const GaussianMixture& m) : dims_(m.dims()) {
    for (std::size_t i = 0; i < m.components(); ++i) {
      if (m.weights[i] <= 0.0) continue;
      double log_norm = std::log(m.weights[i]);
      for (std::size_t d = 0; d < dims_; ++d) {
        log_norm -= 0.5 * (std::log(m.variances[i][d]) + kLogTwoPi);
        means_.push_back(m.means[i][d]);
        inv_var_.push_back(1.0 / m.variances[i][d]);
      }
      log_norm_.push_back(log_norm);
    }
  }

  double log_density(std::span<const double> x) const {
    thread_local std::vector<double> terms;
    terms.resize(log_norm_.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < log_norm_.size(); ++i) {
      double q = 0.0;
      const std::size_t off = i * dims_;
      for (std::size_t d = 0; d < dims_; ++d) {
        const double diff = x[d] - means_[off + d];
        q += diff * diff * inv_var_[off + d];
      }
      terms[i] = log_norm_[i] - 0.5 * q;
      best = std::max(best, terms[i]);
    }
    if (!std::isfinite(best)) return best;
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - best);
    return best + std::log(sum);
  }

  double density(std::span<const double> x) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < log_norm_.size(); ++i) {
      double q = 0.0;
      const std::size_t off = i * dims_;
      for (std::size_t d = 0; d < dims_; ++d) {
        const double diff = x[d] - means_[off + d];
        q += diff * diff * inv_var_[off + d];
      }
      sum += std::exp(log_norm_[i] - 0.5 * q);
    }
    return sum;
  }

 private:
  std::size_t dims_;
  std::vector<double> means_;
  std::vector<double> inv_var_;
  std::vector<double> log_norm_;
};

}  // namespace

void GaussianMixture::validate() const {
  if (means.empty()) throw std::invalid_argument("gmm: no components");
  if (variances.size() != means.size() || weights.size() != means.size()) {
    throw std::invalid_argument("gmm: means/variances/weights length mismatch");
  }
  const std::size_t k = dims();
  if (k == 0) throw std::invalid_argument("gmm: zero dimensions");
  double total = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (means[i].size() != k || variances[i].size() != k) {
      throw std::invalid_argument("gmm: component dimension mismatch");
    }
    for (double v : variances[i]) {
      if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("gmm: variances must be > 0");
    }
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("gmm: negative weight");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("gmm: weights must sum to 1");
}

double gmm_density(const GaussianMixture& m, std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.components(); ++i) {
    sum += m.weights[i] * std::exp(component_log_density(m.means[i], m.variances[i], x));
  }
  return sum;
}

double gmm_log_density(const GaussianMixture& m, std::span<const double> x) {
  return GmmEvaluator(m).log_density(x);
}

Point gmm_sample(const GaussianMixture& m, Rng& rng) {
  const double alpha = rng.uniform();
  std::size_t pick = m.components() - 1;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < m.components(); ++i) {
    cumulative += m.weights[i];
    if (cumulative > alpha && m.weights[i] > 0.0) {
      pick = i;
      break;
    }
  }
  Point x(m.dims());
  for (std::size_t d = 0; d < x.size(); ++d) {
    x[d] = rng.normal(m.means[pick][d], std::sqrt(m.variances[pick][d]));
  }
  return x;
}

double gmm_mass_in(const GaussianMixture& m, const DomainBounds& box) {
  double mass = 0.0;
  for (std::size_t i = 0; i < m.components(); ++i) {
    double p = m.weights[i];
    for (std::size_t d = 0; d < m.dims(); ++d) {
      const double s = std::sqrt(2.0 * m.variances[i][d]);
      p *= 0.5 * (std::erf((box.upper[d] - m.means[i][d]) / s) -
                  std::erf((box.lower[d] - m.means[i][d]) / s));
    }
    mass += p;
  }
  return mass;
}

double TargetDensity::log_density(std::span<const double> x) const {
  if (log_evaluate) return log_evaluate(x);
  return std::log(evaluate(x));
}

TargetDensity make_gmm_target(GaussianMixture model, DomainBounds bounds) {
  model.validate();
  bounds.validate();
  if (bounds.dims() != model.dims()) throw std::invalid_argument("gmm target: dimension mismatch");
  auto eval = std::make_shared<const GmmEvaluator>(model);
  TargetDensity t;
  t.evaluate = [eval](std::span<const double> x) { return eval->density(x); };
  t.log_evaluate = [eval](std::span<const double> x) { return eval->log_density(x); };
  t.bounds = std::move(bounds);
  t.true_model = std::move(model);
  return t;
}

std::string_view to_string(TargetFamily family) {
  switch (family) {
    case TargetFamily::Normal: return "normal";
    case TargetFamily::Gmm5: return "gmm5";
    case TargetFamily::Egg: return "egg";
  }
  return "?";
}

TargetFamily parse_family(std::string_view name) {
  if (name == "normal") return TargetFamily::Normal;
  if (name == "gmm5" || name == "gmm") return TargetFamily::Gmm5;
  if (name == "egg") return TargetFamily::Egg;
  throw std::invalid_argument("unknown target family '" + std::string(name) + "'");
}

TargetDensity make_normal_target(Rng& rng, std::size_t dims) {
  if (dims == 0) throw std::invalid_argument("normal target: dims must be >= 1");
  GaussianMixture m;
  Point mean(dims), var(dims);
  for (auto& v : mean) v = rng.uniform(-1.0, 1.0);
  for (auto& v : var) {
    const double sigma = rng.uniform(0.01, 0.05);
    v = sigma * sigma;
  }
  m.means.push_back(std::move(mean));
  m.variances.push_back(std::move(var));
  m.weights.push_back(1.0);
  return make_gmm_target(std::move(m), DomainBounds::cube(dims, -1.0, 1.0));
}

TargetDensity make_gmm5_target(Rng& rng, std::size_t dims) {
  if (dims == 0) throw std::invalid_argument("gmm5 target: dims must be >= 1");
  GaussianMixture m;
  for (int i = 0; i < 5; ++i) {
    Point mean(dims), var(dims);
    for (auto& v : mean) v = rng.uniform(-1.0, 1.0);
    for (auto& v : var) v = rng.uniform(0.01, 0.05);
    m.means.push_back(std::move(mean));
    m.variances.push_back(std::move(var));
    m.weights.push_back(0.2);
  }
  return make_gmm_target(std::move(m), DomainBounds::cube(dims, -1.0, 1.0));
}

TargetDensity make_egg_target(std::size_t dims) {
  if (dims == 0 || dims > kEggMaxDims) {
    throw std::invalid_argument("egg target: dims must be in [1, " + std::to_string(kEggMaxDims) +
                                "]");
  }
  constexpr double kGrid[4] = {-0.6, -0.2, 0.2, 0.6};
  std::size_t count = 1;
  for (std::size_t d = 0; d < dims; ++d) count *= 4;
  GaussianMixture m;
  for (std::size_t i = 0; i < count; ++i) {
    Point mean(dims);
    std::size_t code = i;
    for (std::size_t d = dims; d-- > 0;) {
      mean[d] = kGrid[code % 4];
      code /= 4;
    }
    m.means.push_back(std::move(mean));
    m.variances.emplace_back(dims, 0.01);
    m.weights.push_back(1.0 / static_cast<double>(count));
  }
  return make_gmm_target(std::move(m), DomainBounds::cube(dims, -1.0, 1.0));
}

TargetDensity make_target(TargetFamily family, std::size_t dims, std::uint64_t seed) {
  Rng rng(seed);
  switch (family) {
    case TargetFamily::Normal: return make_normal_target(rng, dims);
    case TargetFamily::Gmm5: return make_gmm5_target(rng, dims);
    case TargetFamily::Egg: return make_egg_target(dims);
  }
  throw std::invalid_argument("unknown target family");
}

std::string describe(const GaussianMixture& m) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < m.components(); ++i) {
    if (i) out += " | ";
    std::snprintf(buf, sizeof buf, "w=%.17g", m.weights[i]);
    out += buf;
    out += " mu=";
    for (std::size_t d = 0; d < m.dims(); ++d) {
      std::snprintf(buf, sizeof buf, d ? ",%.17g" : "%.17g", m.means[i][d]);
      out += buf;
    }
    out += " var=";
    for (std::size_t d = 0; d < m.dims(); ++d) {
      std::snprintf(buf, sizeof buf, d ? ",%.17g" : "%.17g", m.variances[i][d]);
      out += buf;
    }
  }
  return out;
}

}  // namespace tpais
