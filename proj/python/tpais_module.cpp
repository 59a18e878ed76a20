#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tpais/baselines.hpp"
#include "tpais/bench.hpp"
#include "tpais/errors.hpp"
#include "tpais/metrics.hpp"
#include "tpais/sampler.hpp"
#include "tpais/targets.hpp"

namespace py = pybind11;
using namespace tpais;

namespace {

Weighting parse_weighting(const std::string& s) {
  if (s == "standard") return Weighting::Standard;
  if (s == "dm") return Weighting::DeterministicMixture;
  throw std::invalid_argument("weighting must be 'standard' or 'dm'");
}

NodeSelection parse_selection(const std::string& s) {
  if (s == "max-evidence") return NodeSelection::MaxEvidence;
  if (s == "mixture") return NodeSelection::MixtureDraw;
  throw std::invalid_argument("selection must be 'max-evidence' or 'mixture'");
}

DensityFn wrap(const py::function& fn) {
  return [fn](std::span<const double> x) {
    py::gil_scoped_acquire gil;
    return fn(std::vector<double>(x.begin(), x.end())).cast<double>();
  };
}

py::dict row_to_dict(const bench::ResultRow& r) {
  py::dict d;
  d["method"] = r.method;
  d["family"] = std::string(to_string(r.family));
  d["dims"] = r.dims;
  d["N"] = r.n;
  d["trial"] = r.trial;
  d["seed"] = r.seed;
  d["ness"] = r.ness;
  d["jsd"] = r.jsd;
  d["evidence_mse"] = r.evidence_mse;
  d["wall_time_seconds"] = r.wall_time_seconds;
  d["error"] = r.error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tree-pyramid adaptive importance sampling";

  py::register_exception<SamplingError>(m, "SamplingError", PyExc_RuntimeError);

  py::class_<GaussianMixture>(m, "GaussianMixture")
      .def(py::init([](std::vector<Point> means, std::vector<Point> variances, std::vector<double> weights) {
             GaussianMixture g{std::move(means), std::move(variances), std::move(weights)};
             g.validate();
             return g;
           }),
           py::arg("means"), py::arg("variances"), py::arg("weights"))
      .def_readonly("means", &GaussianMixture::means)
      .def_readonly("variances", &GaussianMixture::variances)
      .def_readonly("weights", &GaussianMixture::weights)
      .def("density", [](const GaussianMixture& g, const Point& x) { return gmm_density(g, x); })
      .def("sample", [](const GaussianMixture& g, std::uint64_t seed, std::size_t n) {
        Rng rng(seed);
        std::vector<Point> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(gmm_sample(g, rng));
        return out;
      }, py::arg("seed"), py::arg("n") = 1)
      .def("__repr__", [](const GaussianMixture& g) { return "GaussianMixture(" + describe(g) + ")"; });

  py::class_<TargetDensity>(m, "Target")
      .def_static("from_callable",
                  [](const py::function& fn, Point lower, Point upper) {
                    TargetDensity t;
                    t.evaluate = wrap(fn);
                    t.bounds = DomainBounds{std::move(lower), std::move(upper)};
                    t.bounds.validate();
                    return t;
                  },
                  py::arg("density"), py::arg("lower"), py::arg("upper"))
      .def_static("from_gmm",
                  [](const GaussianMixture& g, Point lower, Point upper) {
                    return make_gmm_target(g, DomainBounds{std::move(lower), std::move(upper)});
                  },
                  py::arg("model"), py::arg("lower"), py::arg("upper"))
      .def("density", [](const TargetDensity& t, const Point& x) { return t.evaluate(x); })
      .def_property_readonly("dims", &TargetDensity::dims)
      .def_property_readonly("lower", [](const TargetDensity& t) { return t.bounds.lower; })
      .def_property_readonly("upper", [](const TargetDensity& t) { return t.bounds.upper; })
      .def_readonly("true_model", &TargetDensity::true_model);

  m.def("make_target",
        [](const std::string& family, std::size_t dims, std::uint64_t seed) {
          return make_target(parse_family(family), dims, seed);
        },
        py::arg("family"), py::arg("dims"), py::arg("seed") = 0,
        "Random ground-truth target: family is 'normal', 'gmm5' or 'egg'.");

  py::class_<TpAisSampler>(m, "TpAisSampler")
      .def(py::init([](const TargetDensity& target, std::size_t n_samples, const std::string& kernel,
                       const std::string& weighting, const std::string& selection, bool resample,
                       std::uint64_t seed, int max_depth) {
             SamplerConfig c;
             c.dims = target.dims();
             c.n_samples = n_samples;
             c.bounds = target.bounds;
             c.kernel = parse_kernel(kernel);
             c.weighting = parse_weighting(weighting);
             c.node_selection = parse_selection(selection);
             c.resample_leaves = resample;
             c.seed = seed;
             c.max_depth = max_depth;
             return TpAisSampler(target, c);
           }),
           py::arg("target"), py::arg("n_samples"), py::arg("kernel") = "uniform",
           py::arg("weighting") = "standard", py::arg("selection") = "max-evidence",
           py::arg("resample") = false, py::arg("seed") = 0,
           py::arg("max_depth") = TreePyramid::kDefaultMaxDepth)
      .def("step", &TpAisSampler::step)
      .def("run", &TpAisSampler::run)
      .def_property_readonly("done", &TpAisSampler::done)
      .def_property_readonly("leaf_count", [](const TpAisSampler& s) { return s.tree().leaf_count(); })
      .def_property_readonly("target_evaluations", &TpAisSampler::target_evaluations)
      .def("samples", [](const TpAisSampler& s) {
        auto set = s.samples();
        return py::make_tuple(set.samples, set.weights);
      })
      .def("evidence", [](const TpAisSampler& s) { return evidence_estimate(s.mixture_weights_at_samples()); })
      .def("proposal_density", [](const TpAisSampler& s, const Point& x) { return s.proposal().density(x); })
      .def("proposal_sample", [](const TpAisSampler& s, std::uint64_t seed, std::size_t n) {
        Rng rng(seed);
        std::vector<Point> out;
        const auto q = s.proposal();
        for (std::size_t i = 0; i < n; ++i) out.push_back(q.sample(rng));
        return out;
      }, py::arg("seed"), py::arg("n") = 1)
      .def("tree_text", [](const TpAisSampler& s) { return to_text(s.tree()); });

  m.def("run_mh",
        [](const TargetDensity& t, Point initial, std::size_t n, double proposal_std, std::size_t burn_in,
           std::uint64_t seed) {
          MHConfig c{proposal_std, n, burn_in, seed, std::move(initial)};
          auto r = run_mh(t, c);
          return py::make_tuple(r.chain, r.acceptance_rate);
        },
        py::arg("target"), py::arg("initial_point"), py::arg("n_samples"), py::arg("proposal_std") = 0.1,
        py::arg("burn_in") = 0, py::arg("seed") = 0);

  m.def("run_pmc",
        [](const TargetDensity& t, std::size_t population, std::size_t iterations, double kernel_std,
           const std::string& weighting, std::uint64_t seed) {
          PMCConfig c{population, iterations, kernel_std, parse_weighting(weighting), seed};
          auto r = run_pmc(t, c);
          return py::make_tuple(r.set.samples, r.set.weights, r.proposal.locations);
        },
        py::arg("target"), py::arg("population_size"), py::arg("iterations"), py::arg("kernel_std") = 0.1,
        py::arg("weighting") = "standard", py::arg("seed") = 0);

  m.def("ess_is", [](const std::vector<double>& w) { return ess_is(w); });
  m.def("normalized_ess", [](const std::vector<double>& w) { return normalized_ess(w); });
  m.def("ess_mcmc", [](const std::vector<Point>& chain) { return ess_mcmc(chain); });
  m.def("evidence_estimate", [](const std::vector<double>& w) { return evidence_estimate(w); });
  m.def("jsd",
        [](const py::function& p, const py::function& q, Point lower, Point upper, std::size_t n,
           std::uint64_t seed) {
          Rng rng(seed);
          return jsd(wrap(p), wrap(q), DomainBounds{std::move(lower), std::move(upper)}, n, rng);
        },
        py::arg("p"), py::arg("q"), py::arg("lower"), py::arg("upper"), py::arg("n") = 10000,
        py::arg("seed") = 0);
  m.def("kde_density",
        [](std::vector<Point> points, double bandwidth, const std::vector<Point>& queries) {
          const KdeModel kde = kde_fit(std::move(points), bandwidth);
          std::vector<double> out;
          for (const auto& x : queries) out.push_back(kde.density(x));
          return out;
        },
        py::arg("points"), py::arg("bandwidth"), py::arg("queries"));

  m.def("run_experiments",
        [](std::vector<std::string> methods, std::vector<std::string> families, std::vector<std::size_t> dims,
           std::vector<std::size_t> n_grid, std::size_t trials, std::uint64_t seed, std::size_t jsd_points,
           bool timing) {
          bench::ExperimentSpec spec;
          spec.methods = std::move(methods);
          spec.families.clear();
          for (const auto& f : families) spec.families.push_back(parse_family(f));
          spec.dims = std::move(dims);
          spec.sample_counts = std::move(n_grid);
          spec.trials = trials;
          spec.base_seed = seed;
          spec.jsd_points = jsd_points;
          std::vector<bench::ResultRow> rows;
          {
            py::gil_scoped_release release;
            rows = bench::run_experiments(spec, {0, timing});
          }
          py::list out;
          for (const auto& r : rows) out.append(row_to_dict(r));
          std::ostringstream csv;
          bench::write_csv(rows, csv);
          return py::make_tuple(out, csv.str());
        },
        py::arg("methods"), py::arg("families"), py::arg("dims"), py::arg("n_grid"), py::arg("trials") = 3,
        py::arg("seed") = 1, py::arg("jsd_points") = 5000, py::arg("timing") = true,
        "Runs the benchmark matrix; returns (rows, csv_text).");
}
