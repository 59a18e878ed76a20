#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "tpais/targets.hpp"

namespace {

using namespace tpais;

GaussianMixture single(double mean, double var) { return {{{mean}}, {{var}}, {1.0}}; }

double trapezoid_1d(const TargetDensity& t, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double acc = 0.5 * (t.evaluate(Point{lo}) + t.evaluate(Point{hi}));
  for (int i = 1; i < n; ++i) acc += t.evaluate(Point{lo + i * h});
  return acc * h;
}

double trapezoid_2d(const TargetDensity& t, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    for (int j = 0; j <= n; ++j) {
      const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
      acc += wi * wj * t.evaluate(Point{lo + i * h, lo + j * h});
    }
  }
  return acc * h * h;
}

TEST(GmmDensity, Examples) {
  EXPECT_NEAR(gmm_density(single(0.0, 1.0), Point{0.0}), 0.398942280401, 1e-12);

  const GaussianMixture two{{{-1.0}, {1.0}}, {{1.0}, {1.0}}, {0.5, 0.5}};
  EXPECT_NEAR(gmm_density(two, Point{0.0}), std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(gmm_density(two, Point{0.0}), 0.241970724519, 1e-12);

  const GaussianMixture iso{{{0.3, -0.2}}, {{0.01, 0.01}}, {1.0}};
  EXPECT_NEAR(gmm_density(iso, Point{0.3, -0.2}), 1.0 / (2.0 * std::numbers::pi * 0.01), 1e-10);
  EXPECT_NEAR(gmm_density(iso, Point{0.3, -0.2}), 15.9155, 1e-4);
}

TEST(GmmDensity, LogFormAgreesAndTargetEvaluatorAgrees) {
  const GaussianMixture m{{{-0.4, 0.1}, {0.5, 0.5}}, {{0.02, 0.03}, {0.01, 0.05}}, {0.3, 0.7}};
  const TargetDensity t = make_gmm_target(m, DomainBounds::cube(2, -1.0, 1.0));
  for (Point x : {Point{0.0, 0.0}, Point{-0.4, 0.1}, Point{0.9, -0.9}}) {
    const double p = gmm_density(m, x);
    EXPECT_NEAR(t.evaluate(x), p, 1e-13 * p);
    EXPECT_NEAR(gmm_log_density(m, x), std::log(p), 1e-12);
    EXPECT_NEAR(t.log_density(x), std::log(p), 1e-12);
  }
  // Far tail: density underflows, log density stays finite.
  EXPECT_EQ(t.evaluate(Point{100.0, 100.0}), 0.0);
  EXPECT_TRUE(std::isfinite(t.log_density(Point{100.0, 100.0})));
}

TEST(GmmValidate, RejectsBadModels) {
  EXPECT_THROW((GaussianMixture{{{0.0}}, {{0.0}}, {1.0}}.validate()), std::invalid_argument);
  EXPECT_THROW((GaussianMixture{{{0.0}}, {{1.0}}, {0.9}}.validate()), std::invalid_argument);
  EXPECT_THROW((GaussianMixture{{{0.0}, {1.0, 2.0}}, {{1.0}, {1.0, 1.0}}, {0.5, 0.5}}.validate()),
               std::invalid_argument);
}

TEST(NormalFamily, ReproducibleAndInRange) {
  Rng a(42), b(42);
  const auto ta = make_normal_target(a, 3);
  const auto tb = make_normal_target(b, 3);
  EXPECT_EQ(ta.true_model->means, tb.true_model->means);
  EXPECT_EQ(ta.true_model->variances, tb.true_model->variances);
  EXPECT_EQ(ta.bounds.lower, Point(3, -1.0));
  EXPECT_EQ(ta.bounds.upper, Point(3, 1.0));

  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto t = make_normal_target(rng, 2);
    ASSERT_EQ(t.true_model->components(), 1u);
    for (double v : t.true_model->variances[0]) {
      EXPECT_GE(std::sqrt(v), 0.01 - 1e-15);
      EXPECT_LE(std::sqrt(v), 0.05 + 1e-15);
    }
  }
}

TEST(NormalFamily, MeanCoordinatesUniformKs) {
  Rng rng(99);
  const int n = 10000;
  std::vector<double> means;
  for (int i = 0; i < n; ++i) means.push_back(make_normal_target(rng, 1).true_model->means[0][0]);
  std::sort(means.begin(), means.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = (means[i] + 1.0) / 2.0;
    d = std::max({d, (i + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  // Asymptotic Kolmogorov critical value at alpha = 1e-3.
  const double critical = std::sqrt(-0.5 * std::log(1e-3 / 2.0)) / std::sqrt(n);
  EXPECT_LT(d, critical);
}

TEST(Gmm5Family, ShapeAndNormalization) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto t = make_gmm5_target(rng, 1);
    ASSERT_EQ(t.true_model->components(), 5u);
    for (double w : t.true_model->weights) EXPECT_DOUBLE_EQ(w, 0.2);
    for (const auto& v : t.true_model->variances) {
      EXPECT_GE(v[0], 0.01);
      EXPECT_LE(v[0], 0.05);
    }
    EXPECT_NEAR(trapezoid_1d(t, -5.0, 5.0, 200000), 1.0, 1e-6);
  }
}

TEST(EggFamily, GridAndSymmetry) {
  const auto t1 = make_egg_target(1);
  EXPECT_EQ(t1.true_model->components(), 4u);
  const auto t2 = make_egg_target(2);
  EXPECT_EQ(t2.true_model->components(), 16u);
  for (double w : t2.true_model->weights) EXPECT_DOUBLE_EQ(w, 1.0 / 16.0);
  for (Point x : {Point{0.13, -0.71}, Point{0.6, 0.2}, Point{-0.05, 0.95}}) {
    EXPECT_DOUBLE_EQ(t2.evaluate(x), t2.evaluate(Point{-x[0], -x[1]}));
  }
  EXPECT_THROW(make_egg_target(kEggMaxDims + 1), std::invalid_argument);
  EXPECT_THROW(make_egg_target(0), std::invalid_argument);
}

TEST(EggFamily, ModesOnGrid) {
  const auto t = make_egg_target(1);
  const int n = 200000;
  std::vector<double> xs(n + 1), ps(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = -1.0 + 2.0 * i / n;
    ps[i] = t.evaluate(Point{xs[i]});
  }
  std::vector<double> modes;
  for (int i = 1; i < n; ++i) {
    if (ps[i] > ps[i - 1] && ps[i] >= ps[i + 1]) modes.push_back(xs[i]);
  }
  ASSERT_EQ(modes.size(), 4u);
  const double grid[4] = {-0.6, -0.2, 0.2, 0.6};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(modes[i], grid[i], 1e-3);
}

TEST(Families, QuadratureOverPaddedBox) {
  for (TargetFamily f : {TargetFamily::Normal, TargetFamily::Gmm5, TargetFamily::Egg}) {
    const auto t1 = make_target(f, 1, 5);
    EXPECT_NEAR(trapezoid_1d(t1, -2.5, 2.5, 200000), 1.0, 1e-6) << to_string(f);
    const auto t2 = make_target(f, 2, 5);
    EXPECT_NEAR(trapezoid_2d(t2, -2.5, 2.5, 1000), 1.0, 1e-3) << to_string(f);
  }
}

TEST(GmmSample, Moments) {
  Rng rng(21);
  const auto m = single(0.0, 1.0);
  const int n = 100000;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += gmm_sample(m, rng)[0];
  EXPECT_LT(std::abs(mean / n), 3.0 / std::sqrt(n));
}

TEST(GmmSample, ZeroWeightComponentNeverDrawn) {
  Rng rng(22);
  const GaussianMixture m{{{-10.0}, {10.0}}, {{0.01}, {0.01}}, {1.0, 0.0}};
  for (int i = 0; i < 10000; ++i) EXPECT_LT(gmm_sample(m, rng)[0], 0.0);
}

TEST(GmmSample, ComponentFrequenciesChiSquare) {
  Rng rng(23);
  const GaussianMixture m{{{-5.0}, {5.0}}, {{0.01}, {0.01}}, {0.5, 0.5}};
  const int n = 100000;
  int left = 0;
  for (int i = 0; i < n; ++i) left += gmm_sample(m, rng)[0] < 0.0;
  const double e = n / 2.0;
  const double chi2 = 2.0 * (left - e) * (left - e) / e;
  EXPECT_LT(chi2, boost::math::quantile(boost::math::complement(boost::math::chi_squared(1.0), 1e-3)));
}

TEST(GmmMass, MatchesQuadrature) {
  const GaussianMixture m{{{0.95}}, {{0.0025}}, {1.0}};
  const auto t = make_gmm_target(m, DomainBounds::cube(1, -1.0, 1.0));
  EXPECT_NEAR(gmm_mass_in(m, t.bounds), trapezoid_1d(t, -1.0, 1.0, 200000), 1e-8);
}

}  // namespace
