#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tpais/bench.hpp"

namespace {

using namespace tpais;
using namespace tpais::bench;

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.methods = {"tpais"};
  s.families = {TargetFamily::Normal};
  s.dims = {1};
  s.sample_counts = {16};
  s.trials = 3;
  s.jsd_points = 500;
  return s;
}

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(Bench, RowCount) {
  const auto rows = run_experiments(small_spec(), {1, false});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].ok()) << rows[i].error;
    EXPECT_EQ(rows[i].trial, i);
  }
}

TEST(Bench, MatrixOrderingAndDeterminism) {
  ExperimentSpec s = small_spec();
  s.methods = {"tpais", "mh", "dm-pmc"};
  s.families = {TargetFamily::Gmm5, TargetFamily::Egg};
  s.dims = {1, 2};
  s.sample_counts = {16, 32};
  s.trials = 2;
  const auto a = run_experiments(s, {3, false});
  const auto b = run_experiments(s, {1, false});
  ASSERT_EQ(a.size(), 3u * 2 * 2 * 2 * 2);
  EXPECT_EQ(csv_of(a), csv_of(b));
  // family -> dims -> N -> method -> trial
  EXPECT_EQ(a[0].method, "tpais");
  EXPECT_EQ(a[1].trial, 1u);
  EXPECT_EQ(a[2].method, "mh");
  EXPECT_EQ(a[6].n, 32u);
  EXPECT_EQ(a[12].dims, 2u);
  EXPECT_EQ(a[24].family, TargetFamily::Egg);
}

TEST(Bench, SameTargetSeedAcrossMethodsAndN) {
  ExperimentSpec s = small_spec();
  s.methods = {"tpais", "tpais-rs", "mh", "pmc"};
  s.sample_counts = {16, 64};
  s.trials = 2;
  const auto rows = run_experiments(s, {1, false});
  for (const auto& r : rows) {
    EXPECT_EQ(r.seed, target_seed(s.base_seed, r.family, r.dims, r.trial));
  }
  EXPECT_NE(target_seed(1, TargetFamily::Normal, 1, 0), target_seed(1, TargetFamily::Normal, 1, 1));
  EXPECT_NE(target_seed(1, TargetFamily::Normal, 1, 0), target_seed(1, TargetFamily::Gmm5, 1, 0));
  EXPECT_NE(target_seed(1, TargetFamily::Normal, 1, 0), target_seed(1, TargetFamily::Normal, 2, 0));

  std::ostringstream log;
  write_target_log(s, log);
  EXPECT_EQ(line_count(log.str()), 1u + 2u);
}

TEST(Bench, FailingCellIsRecorded) {
  ExperimentSpec s = small_spec();
  s.families = {TargetFamily::Egg};
  s.dims = {1, 8};
  s.trials = 1;
  const auto rows = run_experiments(s, {1, false});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].ok());
  EXPECT_FALSE(rows[1].ok());
  EXPECT_TRUE(std::isnan(rows[1].jsd));
}

TEST(Bench, MetricRanges) {
  ExperimentSpec s = small_spec();
  s.methods = known_methods();
  s.families = {TargetFamily::Gmm5};
  s.dims = {1, 2};
  s.sample_counts = {64};
  s.trials = 2;
  for (const auto& r : run_experiments(s, {1, true})) {
    ASSERT_TRUE(r.ok()) << r.method << ": " << r.error;
    EXPECT_GT(r.ness, 0.0);
    EXPECT_LE(r.ness, 1.0 + 1e-12);
    EXPECT_GE(r.jsd, 0.0);
    EXPECT_LE(r.jsd, std::log(2.0) + 1e-2);
    if (r.method == "mh") {
      EXPECT_TRUE(std::isnan(r.evidence_mse));
    } else {
      EXPECT_GE(r.evidence_mse, 0.0);
    }
    EXPECT_GE(r.wall_time_seconds, 0.0);
  }
}

TEST(Bench, CsvShape) {
  EXPECT_EQ(csv_of({}), std::string(kCsvHeader) + "\n");
  ResultRow r;
  r.method = "tpais";
  r.n = 16;
  r.ness = 0.5;
  r.evidence_mse = std::numeric_limits<double>::quiet_NaN();
  const std::string text = csv_of({r});
  EXPECT_EQ(line_count(text), 2u);
  EXPECT_NE(text.find("tpais,normal,1,16,0,0,0.5,0,nan,0\n"), std::string::npos) << text;
}

TEST(Bench, EmitFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "tpais_bench_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  ExperimentSpec s = small_spec();
  s.methods = {"tpais", "mh"};
  s.sample_counts = {16, 32};
  const auto rows = run_experiments(s, {1, false});
  emit_csv(rows, dir / "results.csv");
  std::ifstream in(dir / "results.csv");
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), csv_of(rows));

  const auto plots = emit_plots(rows, dir);
  ASSERT_EQ(plots.size(), 4u);
  for (const auto& p : plots) {
    std::ifstream f(p);
    std::string first;
    std::getline(f, first);
    EXPECT_NE(first.find("<svg"), std::string::npos) << p;
  }
  EXPECT_THROW(emit_plots({}, dir), std::invalid_argument);
  EXPECT_THROW(emit_csv(rows, dir / "missing" / "x.csv"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(Bench, SpecValidation) {
  ExperimentSpec s = small_spec();
  s.methods = {"nope"};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.trials = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.dims.clear();
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_THROW(run_experiments(s), std::invalid_argument);
}

}  // namespace
