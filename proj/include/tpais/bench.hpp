#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tpais/targets.hpp"

namespace tpais::bench {

/// Method identifiers understood by run_experiments:
///   tpais        standard weights, uniform kernel, max-evidence selection
///   tpais-rs     tpais + leaf resampling before every selection
///   tpais-dm     deterministic-mixture weights
///   tpais-mix    node selection by drawing from the weighted mixture
///   tpais-gauss  Gaussian kernels
///   mh           random-walk Metropolis-Hastings, JSD against a KDE of the chain
///   pmc          population Monte Carlo, per-kernel weights
///   dm-pmc       population Monte Carlo, deterministic-mixture weights
const std::vector<std::string>& known_methods();
bool is_known_method(std::string_view id);

struct ExperimentSpec {
  std::vector<std::string> methods{"tpais", "tpais-rs", "mh", "pmc", "dm-pmc"};
  std::vector<TargetFamily> families{TargetFamily::Normal, TargetFamily::Gmm5, TargetFamily::Egg};
  std::vector<std::size_t> dims{1, 2, 3};
  std::vector<std::size_t> sample_counts{16, 32, 64, 128, 256, 512, 1024};
  std::size_t trials = 20;
  std::uint64_t base_seed = 1;
  std::size_t jsd_points = 20000;
  double kde_bandwidth = 0.05;
  double mh_proposal_std = 0.1;
  double pmc_kernel_std = 0.1;

  /// Throws std::invalid_argument on empty lists, unknown methods, zero trials, etc.
  void validate() const;
};

struct ResultRow {
  std::string method;
  TargetFamily family = TargetFamily::Normal;
  std::size_t dims = 1;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // target seed, shared by every method of the cell
  double ness = 0.0;
  double jsd = 0.0;
  double evidence_mse = 0.0;  // NaN for methods without an evidence estimate
  double wall_time_seconds = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

struct RunOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
  bool record_timing = true;  // false writes 0 so output is byte-reproducible
};

/// Target seed for one (family, dims, trial); independent of method and N.
std::uint64_t target_seed(std::uint64_t base_seed, TargetFamily family, std::size_t dims,
                          std::size_t trial);

/// Runs one method on one target instance and collects its metrics. Errors
/// are captured in the row, never thrown.
ResultRow run_cell(const ExperimentSpec& spec, const std::string& method, TargetFamily family,
                   std::size_t dims, std::size_t n, std::size_t trial, bool record_timing = true);

/// Full matrix, rows ordered by (family, dims, N, method, trial) regardless
/// of the order workers finish in.
std::vector<ResultRow> run_experiments(const ExperimentSpec& spec, const RunOptions& options = {});

inline constexpr std::string_view kCsvHeader =
    "method,family,dims,N,trial,seed,ness,jsd,evidence_mse,wall_time_seconds";

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

/// One SVG per metric (ness, jsd, evidence_mse, wall_time_seconds), one panel
/// per (family, dims), median curve and inter-quartile band per method over a
/// log2 N axis. Returns the written paths. Throws on empty rows.
std::vector<std::filesystem::path> emit_plots(const std::vector<ResultRow>& rows,
                                              const std::filesystem::path& out_dir);

/// Parameters of every generated target, one line per (family, dims, trial).
void write_target_log(const ExperimentSpec& spec, std::ostream& out);

}  // namespace tpais::bench
