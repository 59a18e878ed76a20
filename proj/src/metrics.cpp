#include "tpais/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tpais/errors.hpp"

namespace tpais {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

std::vector<Point> uniform_points(const DomainBounds& bounds, std::size_t n, Rng& rng) {
  std::vector<Point> pts(n, Point(bounds.dims()));
  for (Point& p : pts) {
    for (std::size_t d = 0; d < bounds.dims(); ++d) {
      p[d] = rng.uniform(bounds.lower[d], bounds.upper[d]);
    }
  }
  return pts;
}

double xlogx_over(double a, double b) { return a > 0.0 ? a * std::log(a / b) : 0.0; }

}  // namespace

double ess_is(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("ess: weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw SamplingError("ess: all weights are zero");
  double sq = 0.0;
  for (double w : weights) {
    const double wn = w / total;
    sq += wn * wn;
  }
  return 1.0 / sq;
}

double normalized_ess(std::span<const double> weights) {
  return ess_is(weights) / static_cast<double>(weights.size());
}

double ess_mcmc(std::span<const Point> chain) {
  const std::size_t n = chain.size();
  if (n < 2) throw std::invalid_argument("ess_mcmc: chain needs at least 2 states");
  const std::size_t dims = chain.front().size();
  const auto nd = static_cast<double>(n);
  double best = nd;
  std::vector<double> centred(n);
  for (std::size_t d = 0; d < dims; ++d) {
    double mean = 0.0;
    for (const Point& s : chain) mean += s[d];
    mean /= nd;
    double var = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      centred[t] = chain[t][d] - mean;
      var += centred[t] * centred[t];
    }
    var /= nd;
    if (!(var > 0.0)) throw SamplingError("ess_mcmc: constant chain, autocorrelation undefined");

    auto rho = [&](std::size_t lag) {
      double acc = 0.0;
      for (std::size_t t = 0; t + lag < n; ++t) acc += centred[t] * centred[t + lag];
      return acc / nd / var;
    };
    // Initial positive sequence over pairs (rho(2m), rho(2m+1)), rho(0) = 1.
    double pair_sum = 0.0;
    for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
      const double gamma = (m == 0 ? 1.0 : rho(2 * m)) + rho(2 * m + 1);
      if (!(gamma > 0.0)) break;
      pair_sum += gamma;
    }
    const double tau = 2.0 * pair_sum - 1.0;
    double ess = tau > 0.0 ? nd / tau : nd;
    ess = std::clamp(ess, 1.0, nd);
    best = std::min(best, ess);
  }
  return best;
}

double kl_mc(const DensityFn& p, const DensityFn& q, const DomainBounds& bounds, std::size_t n,
             Rng& rng) {
  if (n == 0) throw std::invalid_argument("kl_mc: n must be >= 1");
  double sum = 0.0;
  for (const Point& x : uniform_points(bounds, n, rng)) {
    const double pv = p(x);
    if (pv <= 0.0) continue;
    const double qv = q(x);
    if (!(qv > 0.0)) return std::numeric_limits<double>::infinity();
    sum += pv * std::log(pv / qv);
  }
  return bounds.volume() * sum / static_cast<double>(n);
}

double jsd_on_points(const DensityFn& p, const DensityFn& q, std::span<const Point> points,
                     double volume) {
  if (points.empty()) throw std::invalid_argument("jsd: no points");
  double sum = 0.0;
  for (const Point& x : points) {
    const double pv = p(x);
    const double qv = q(x);
    const double m = 0.5 * (pv + qv);
    if (!(m > 0.0)) continue;
    sum += 0.5 * xlogx_over(pv, m) + 0.5 * xlogx_over(qv, m);
  }
  return volume * sum / static_cast<double>(points.size());
}

double jsd(const DensityFn& p, const DensityFn& q, const DomainBounds& bounds, std::size_t n,
           Rng& rng) {
  if (n == 0) throw std::invalid_argument("jsd: n must be >= 1");
  const auto pts = uniform_points(bounds, n, rng);
  return jsd_on_points(p, q, pts, bounds.volume());
}

KdeModel::KdeModel(std::vector<Point> points, double bandwidth) : bandwidth_(bandwidth) {
  if (points.empty()) throw std::invalid_argument("kde: needs at least one point");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("kde: bandwidth must be > 0");
  dims_ = points.front().size();
  if (dims_ == 0) throw std::invalid_argument("kde: zero-dimensional points");
  points_.reserve(points.size() * dims_);
  for (const Point& p : points) {
    if (p.size() != dims_) throw std::invalid_argument("kde: inconsistent point dimensions");
    points_.insert(points_.end(), p.begin(), p.end());
  }
  const auto k = static_cast<double>(dims_);
  log_norm_ = -k * (std::log(bandwidth_) + 0.5 * kLogTwoPi) - std::log(static_cast<double>(size()));
}

double KdeModel::density(std::span<const double> x) const {
  const double inv_h2 = 1.0 / (bandwidth_ * bandwidth_);
  double sum = 0.0;
  for (std::size_t off = 0; off < points_.size(); off += dims_) {
    double sq = 0.0;
    for (std::size_t d = 0; d < dims_; ++d) {
      const double diff = x[d] - points_[off + d];
      sq += diff * diff;
    }
    sum += std::exp(-0.5 * sq * inv_h2);
  }
  return sum * std::exp(log_norm_);
}

KdeModel kde_fit(std::vector<Point> points, double bandwidth) {
  return KdeModel(std::move(points), bandwidth);
}

double evidence_estimate(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("evidence: no weights");
  return std::accumulate(weights.begin(), weights.end(), 0.0) / static_cast<double>(weights.size());
}

double evidence_mse(std::span<const double> estimates, double true_z) {
  if (estimates.empty()) throw std::invalid_argument("evidence_mse: no estimates");
  double acc = 0.0;
  for (double z : estimates) acc += (z - true_z) * (z - true_z);
  return acc / static_cast<double>(estimates.size());
}

double expectation_estimate(const std::function<double(std::span<const double>)>& f,
                            std::span<const Point> samples, std::span<const double> weights) {
  if (samples.size() != weights.size()) throw std::invalid_argument("expectation: size mismatch");
  double total = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    total += weights[i];
    acc += weights[i] * f(samples[i]);
  }
  if (!(total > 0.0)) throw SamplingError("expectation: total weight is zero");
  return acc / total;
}

}  // namespace tpais
