#include "tpais/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tpais/baselines.hpp"
#include "tpais/errors.hpp"
#include "tpais/metrics.hpp"
#include "tpais/sampler.hpp"

namespace tpais::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SamplerConfig tpais_config(const std::string& method, const TargetDensity& target, std::size_t n,
                           std::uint64_t seed) {
  SamplerConfig c;
  c.dims = target.dims();
  c.n_samples = n;
  c.bounds = target.bounds;
  c.seed = seed;
  if (method == "tpais-rs") c.resample_leaves = true;
  if (method == "tpais-dm") c.weighting = Weighting::DeterministicMixture;
  if (method == "tpais-mix") c.node_selection = NodeSelection::MixtureDraw;
  if (method == "tpais-gauss") c.kernel = Kernel::Gaussian;
  return c;
}

std::vector<Point> jsd_points(const DomainBounds& bounds, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts(n, Point(bounds.dims()));
  for (Point& p : pts) {
    for (std::size_t d = 0; d < bounds.dims(); ++d) {
      p[d] = rng.uniform(bounds.lower[d], bounds.upper[d]);
    }
  }
  return pts;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods{"tpais",       "tpais-rs", "tpais-dm", "tpais-mix",
                                                "tpais-gauss", "mh",       "pmc",      "dm-pmc"};
  return methods;
}

bool is_known_method(std::string_view id) {
  const auto& m = known_methods();
  return std::find(m.begin(), m.end(), id) != m.end();
}

void ExperimentSpec::validate() const {
  if (methods.empty() || families.empty() || dims.empty() || sample_counts.empty()) {
    throw std::invalid_argument("experiment: methods, families, dims and N grid must be non-empty");
  }
  for (const auto& m : methods) {
    if (!is_known_method(m)) throw std::invalid_argument("experiment: unknown method '" + m + "'");
  }
  for (std::size_t d : dims) {
    if (d < 1) throw std::invalid_argument("experiment: dims must be >= 1");
  }
  for (std::size_t n : sample_counts) {
    if (n < 1) throw std::invalid_argument("experiment: N must be >= 1");
  }
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (jsd_points < 1) throw std::invalid_argument("experiment: jsd_points must be >= 1");
  if (!(kde_bandwidth > 0.0)) throw std::invalid_argument("experiment: kde bandwidth must be > 0");
}

std::uint64_t target_seed(std::uint64_t base_seed, TargetFamily family, std::size_t dims,
                          std::size_t trial) {
  std::uint64_t s = combine_seed(base_seed, hash_name(to_string(family)));
  s = combine_seed(s, dims);
  return combine_seed(s, trial);
}

ResultRow run_cell(const ExperimentSpec& spec, const std::string& method, TargetFamily family,
                   std::size_t dims, std::size_t n, std::size_t trial, bool record_timing) {
  ResultRow row;
  row.method = method;
  row.family = family;
  row.dims = dims;
  row.n = n;
  row.trial = trial;
  row.seed = target_seed(spec.base_seed, family, dims, trial);
  try {
    const TargetDensity target = make_target(family, dims, row.seed);
    const std::uint64_t method_seed = combine_seed(combine_seed(row.seed, hash_name(method)), n);
    const auto points = jsd_points(target.bounds, spec.jsd_points, combine_seed(row.seed, hash_name("jsd")));
    const double volume = target.bounds.volume();

    double elapsed = 0.0;
    if (method.starts_with("tpais")) {
      const auto config = tpais_config(method, target, n, method_seed);
      const auto start = Clock::now();
      TpAisSampler sampler(target, config);
      sampler.run();
      elapsed = seconds_since(start);
      const auto set = sampler.samples();
      const ProposalDistribution q = sampler.proposal();
      row.ness = normalized_ess(set.weights);
      row.jsd = jsd_on_points(target.evaluate, [&](std::span<const double> x) { return q.density(x); },
                              points, volume);
      const double z = evidence_estimate(sampler.mixture_weights_at_samples());
      row.evidence_mse = (z - 1.0) * (z - 1.0);
    } else if (method == "mh") {
      Rng init(combine_seed(method_seed, hash_name("init")));
      MHConfig config;
      config.proposal_std = spec.mh_proposal_std;
      config.n_samples = n;
      config.seed = method_seed;
      config.initial_point.resize(dims);
      for (std::size_t d = 0; d < dims; ++d) {
        config.initial_point[d] = init.uniform(target.bounds.lower[d], target.bounds.upper[d]);
      }
      const auto start = Clock::now();
      MHResult mh = run_mh(target, config);
      elapsed = seconds_since(start);
      double ess = 1.0;
      if (mh.chain.size() >= 2) {
        try {
          ess = ess_mcmc(mh.chain);
        } catch (const SamplingError&) {
          ess = 1.0;  // chain never moved: one state's worth of information
        }
      }
      row.ness = ess / static_cast<double>(mh.chain.size());
      const KdeModel kde(mh.chain, spec.kde_bandwidth);
      row.jsd = jsd_on_points(target.evaluate, [&](std::span<const double> x) { return kde.density(x); },
                              points, volume);
      row.evidence_mse = kNaN;
    } else {
      PMCConfig config;
      config.iterations = std::clamp<std::size_t>(n / 16, 1, 10);
      config.population_size = (n + config.iterations - 1) / config.iterations;
      config.kernel_std = spec.pmc_kernel_std;
      config.weighting = method == "dm-pmc" ? Weighting::DeterministicMixture : Weighting::Standard;
      config.seed = method_seed;
      const auto start = Clock::now();
      PMCResult pmc = run_pmc(target, config);
      elapsed = seconds_since(start);
      row.ness = normalized_ess(pmc.set.weights);
      row.jsd = jsd_on_points(target.evaluate,
                              [&](std::span<const double> x) { return pmc.proposal.density(x); }, points,
                              volume);
      const double z = evidence_estimate(pmc.set.weights);
      row.evidence_mse = (z - 1.0) * (z - 1.0);
    }
    row.wall_time_seconds = record_timing ? elapsed : 0.0;
  } catch (const std::exception& e) {
    row.error = e.what();
    row.ness = row.jsd = row.evidence_mse = row.wall_time_seconds = kNaN;
  }
  return row;
}

std::vector<ResultRow> run_experiments(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();
  struct Task {
    const std::string* method;
    TargetFamily family;
    std::size_t dims, n, trial;
  };
  std::vector<Task> tasks;
  for (TargetFamily f : spec.families) {
    for (std::size_t d : spec.dims) {
      for (std::size_t n : spec.sample_counts) {
        for (const auto& m : spec.methods) {
          for (std::size_t t = 0; t < spec.trials; ++t) tasks.push_back({&m, f, d, n, t});
        }
      }
    }
  }

  std::vector<ResultRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      rows[i] = run_cell(spec, *t.method, t.family, t.dims, t.n, t.trial, options.record_timing);
    }
  };
  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, tasks.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << to_string(r.family) << ',' << r.dims << ',' << r.n << ',' << r.trial
        << ',' << r.seed << ',' << format_double(r.ness) << ',' << format_double(r.jsd) << ','
        << format_double(r.evidence_mse) << ',' << format_double(r.wall_time_seconds) << '\n';
  }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_csv(rows, out);
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_target_log(const ExperimentSpec& spec, std::ostream& out) {
  out << "family,dims,trial,seed,model\n";
  for (TargetFamily f : spec.families) {
    for (std::size_t d : spec.dims) {
      for (std::size_t t = 0; t < spec.trials; ++t) {
        const auto seed = target_seed(spec.base_seed, f, d, t);
        out << to_string(f) << ',' << d << ',' << t << ',' << seed << ',';
        try {
          out << '"' << describe(*make_target(f, d, seed).true_model) << '"';
        } catch (const std::exception& e) {
          out << "\"error: " << e.what() << '"';
        }
        out << '\n';
      }
    }
  }
}

// ---------------------------------------------------------------------------
// SVG plots

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct Band {
  double n, q25, median, q75;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

double metric_of(const ResultRow& r, std::string_view metric) {
  if (metric == "ness") return r.ness;
  if (metric == "jsd") return r.jsd;
  if (metric == "evidence_mse") return r.evidence_mse;
  return r.wall_time_seconds;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::vector<ResultRow>& rows,
                                              const std::filesystem::path& out_dir) {
  if (rows.empty()) throw std::invalid_argument("plots: no rows");
  std::filesystem::create_directories(out_dir);

  using PanelKey = std::pair<std::string, std::size_t>;  // family, dims
  std::vector<PanelKey> panels;
  std::vector<std::string> methods;
  for (const auto& r : rows) {
    PanelKey key{std::string(to_string(r.family)), r.dims};
    if (std::find(panels.begin(), panels.end(), key) == panels.end()) panels.push_back(key);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }

  const std::vector<std::string> metrics{"ness", "jsd", "evidence_mse", "wall_time_seconds"};
  std::vector<std::filesystem::path> written;
  constexpr double kPanelW = 360, kPanelH = 260, kMargin = 50;
  const std::size_t cols = std::min<std::size_t>(3, panels.size());
  const std::size_t rows_n = (panels.size() + cols - 1) / cols;
  const double width = cols * kPanelW;
  const double height = rows_n * kPanelH + 30.0 + 20.0 * static_cast<double>(methods.size());

  for (const auto& metric : metrics) {
    const bool log_y = metric != "ness";
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
      const auto& [family, dims] = panels[p];
      const double ox = static_cast<double>(p % cols) * kPanelW;
      const double oy = static_cast<double>(p / cols) * kPanelH;

      std::map<std::string, std::vector<Band>> curves;
      double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
      for (const auto& m : methods) {
        std::map<std::size_t, std::vector<double>> by_n;
        for (const auto& r : rows) {
          if (r.method != m || to_string(r.family) != family || r.dims != dims || !r.ok()) continue;
          const double v = metric_of(r, metric);
          if (!std::isfinite(v) || (log_y && v <= 0.0)) continue;
          by_n[r.n].push_back(log_y ? std::log10(v) : v);
        }
        for (auto& [n, vals] : by_n) {
          Band b{std::log2(static_cast<double>(n)), quantile(vals, 0.25), quantile(vals, 0.5),
                 quantile(vals, 0.75)};
          xmin = std::min(xmin, b.n);
          xmax = std::max(xmax, b.n);
          ymin = std::min(ymin, b.q25);
          ymax = std::max(ymax, b.q75);
          curves[m].push_back(b);
        }
      }
      svg << "<g transform=\"translate(" << ox << ',' << oy << ")\">\n";
      svg << "<text x=\"" << kPanelW / 2 << "\" y=\"16\" text-anchor=\"middle\">" << family << ' '
          << dims << "D</text>\n";
      const double pw = kPanelW - 1.5 * kMargin, ph = kPanelH - 2 * kMargin;
      svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin / 2 + 8 << "\" width=\"" << pw
          << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#888\"/>\n";
      if (curves.empty()) {
        svg << "</g>\n";
        continue;
      }
      if (xmax == xmin) xmax = xmin + 1;
      if (ymax == ymin) {
        ymax += 0.5;
        ymin -= 0.5;
      }
      const double top = kMargin / 2 + 8;
      auto sx = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * pw; };
      auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };
      char buf[64];
      for (double x = std::ceil(xmin); x <= xmax; x += 1.0) {
        svg << "<text x=\"" << sx(x) << "\" y=\"" << top + ph + 14 << "\" text-anchor=\"middle\">"
            << static_cast<long long>(std::llround(std::exp2(x))) << "</text>\n";
      }
      for (int i = 0; i <= 4; ++i) {
        const double y = ymin + (ymax - ymin) * i / 4.0;
        std::snprintf(buf, sizeof buf, "%.3g", log_y ? std::pow(10.0, y) : y);
        svg << "<text x=\"" << kMargin - 4 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">" << buf
            << "</text>\n";
      }
      svg << "<text x=\"" << kMargin + pw / 2 << "\" y=\"" << top + ph + 30
          << "\" text-anchor=\"middle\">N</text>\n";

      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        auto it = curves.find(methods[mi]);
        if (it == curves.end()) continue;
        const auto& bands = it->second;
        const char* color = kPalette[mi % std::size(kPalette)];
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (const auto& b : bands) svg << sx(b.n) << ',' << sy(b.q75) << ' ';
        for (auto b = bands.rbegin(); b != bands.rend(); ++b) svg << sx(b->n) << ',' << sy(b->q25) << ' ';
        svg << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (const auto& b : bands) svg << sx(b.n) << ',' << sy(b.median) << ' ';
        svg << "\"/>\n";
      }
      svg << "</g>\n";
    }

    double ly = static_cast<double>(rows_n) * kPanelH + 20.0;
    svg << "<text x=\"10\" y=\"" << ly << "\">" << metric << (log_y ? " (log scale)" : "")
        << ", median and inter-quartile band</text>\n";
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      ly += 20.0;
      svg << "<rect x=\"10\" y=\"" << ly - 10 << "\" width=\"14\" height=\"10\" fill=\""
          << kPalette[mi % std::size(kPalette)] << "\"/><text x=\"30\" y=\"" << ly << "\">" << methods[mi]
          << "</text>\n";
    }
    svg << "</svg>\n";

    const auto path = out_dir / (metric + ".svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << svg.str();
    written.push_back(path);
  }
  return written;
}

}  // namespace tpais::bench
