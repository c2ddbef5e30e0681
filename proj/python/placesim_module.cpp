#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "placesim/config.hpp"
#include "placesim/engine.hpp"
#include "placesim/models.hpp"
#include "placesim/pricing.hpp"
#include "placesim/sim.hpp"
#include "placesim/workload.hpp"

namespace py = pybind11;
using namespace placesim;

namespace {

std::vector<FeatureRow> to_features(const std::vector<std::pair<double, double>>& rows) {
  std::vector<FeatureRow> features;
  features.reserve(rows.size());
  for (const auto& [size, mem] : rows) features.push_back({size, mem});
  return features;
}

}  // namespace

PYBIND11_MODULE(_placesim, m) {
  m.doc() = "Edge-cloud serverless placement simulator";

  py::class_<ContainerConfig>(m, "ContainerConfig")
      .def_static("edge", &ContainerConfig::edge)
      .def_static("cloud", &ContainerConfig::cloud, py::arg("memory_mb"))
      .def_property_readonly("is_edge", &ContainerConfig::is_edge)
      .def_readonly("memory_mb", &ContainerConfig::memory_mb)
      .def("__repr__", [](const ContainerConfig& c) { return to_string(c); })
      .def("__eq__",
           [](const ContainerConfig& a, const ContainerConfig& b) { return a == b; })
      .def("__hash__", [](const ContainerConfig& c) {
        return std::hash<int>()(c.is_edge() ? -1 : c.memory_mb);
      });

  py::class_<PricingPolicy>(m, "PricingPolicy")
      .def(py::init<>())
      .def_readwrite("usd_per_gb_s", &PricingPolicy::usd_per_gb_s)
      .def_readwrite("quantum_ms", &PricingPolicy::quantum_ms)
      .def_readwrite("per_request_usd", &PricingPolicy::per_request_usd);

  m.def("billed_ms", &billed_ms, py::arg("comp_ms"), py::arg("policy") = PricingPolicy{});
  m.def("cost", &cost, py::arg("comp_ms"), py::arg("config"),
        py::arg("policy") = PricingPolicy{});

  py::class_<LinearModel>(m, "LinearModel")
      .def_readonly("intercept", &LinearModel::intercept)
      .def_readonly("slope", &LinearModel::slope)
      .def("predict", &LinearModel::predict, py::arg("x"));

  py::class_<GBRTModel>(m, "GBRTModel")
      .def("predict", &GBRTModel::predict, py::arg("size"), py::arg("memory_mb"))
      .def_property_readonly("n_trees",
                             [](const GBRTModel& g) { return g.trees.size(); });

  m.def(
      "fit_linear",
      [](const std::vector<double>& xs, const std::vector<double>& ys, double ridge_penalty) {
        return fit_linear(xs, ys, ridge_penalty);
      },
      py::arg("xs"), py::arg("ys"), py::arg("ridge_penalty") = 0.0);

  m.def(
      "fit_mean",
      [](const std::vector<double>& samples) {
        const auto m2 = fit_mean(samples);
        return py::make_tuple(m2.mean_ms, m2.stddev_ms);
      },
      py::arg("samples"));

  m.def(
      "fit_gbrt",
      [](const std::vector<std::pair<double, double>>& features,
         const std::vector<double>& targets, int n_trees, int max_depth, double learning_rate,
         double subsample_fraction, int min_leaf, std::uint64_t seed) {
        return fit_gbrt(to_features(features), targets,
                        {n_trees, max_depth, learning_rate, subsample_fraction, min_leaf}, seed);
      },
      py::arg("features"), py::arg("targets"), py::arg("n_trees") = 100,
      py::arg("max_depth") = 3, py::arg("learning_rate") = 0.1,
      py::arg("subsample_fraction") = 1.0, py::arg("min_leaf") = 5, py::arg("seed") = 0);

  m.def("mape", &mape, py::arg("predicted"), py::arg("actual"));

  m.def(
      "generate_arrivals",
      [](std::size_t n, const std::string& mode, double rate_per_s, std::uint64_t seed) {
        const ArrivalMode arrival_mode =
            mode == "poisson" ? ArrivalMode::Poisson : ArrivalMode::Fixed;
        return generate_arrivals(n, arrival_mode, rate_per_s, seed);
      },
      py::arg("n"), py::arg("mode") = "fixed", py::arg("rate_per_s") = 1.0, py::arg("seed") = 0);

  py::class_<PerfModelBundle>(m, "PerfModelBundle")
      .def_property_readonly("config_set",
                             [](const PerfModelBundle& b) { return b.config_set; })
      .def_readonly("t_idl_ms", &PerfModelBundle::t_idl_ms)
      .def("predict_upload", &PerfModelBundle::predict_upload, py::arg("size"))
      .def("to_json", [](const PerfModelBundle& b) { return bundle_to_json(b); })
      .def_static("from_json",
                  [](const std::string& text) { return bundle_from_json(text); })
      .def("save", [](const PerfModelBundle& b, const std::string& path) {
        save_bundle(b, path);
      })
      .def_static("load", [](const std::string& path) { return load_bundle(path); });

  m.def(
      "train",
      [](const std::string& trace_path, const std::string& workload_path,
         double holdout_fraction, std::uint64_t seed) {
        const auto trace = load_trace(trace_path);
        const auto workload = load_workload(workload_path);
        std::map<std::string, double> sizes;
        for (const auto& item : workload.items) sizes[item.id] = item.size;
        TrainOptions options;
        options.holdout_fraction = holdout_fraction;
        options.seed = seed;
        options.gbrt = {200, 3, 0.3, 1.0, 1};
        const auto result = train_bundle(trace, sizes, options);
        return py::make_tuple(result.bundle, result.report.component_mape);
      },
      py::arg("trace_path"), py::arg("workload_path"), py::arg("holdout_fraction") = 0.2,
      py::arg("seed") = 0);

  m.def(
      "simulate",
      [](const std::string& bundle_path, const std::string& workload_path,
         const std::string& policy_kind, double deadline_ms, double budget_usd_per_task,
         double alpha, double noise_sigma, std::uint64_t seed) {
        const auto bundle = load_bundle(bundle_path);
        const auto workload = load_workload(workload_path);
        PolicySpec policy;
        if (policy_kind == "min_cost") {
          policy = {PolicyKind::MinCost, deadline_ms, 0.0, 0.0};
        } else {
          policy = {PolicyKind::MinLatency, 0.0, budget_usd_per_task, alpha};
        }
        SimOptions options;
        options.mode = SimMode::Generative;
        options.noise = NoiseSpec::uniform(noise_sigma);
        options.seeds.sim = seed;
        const auto result = run(workload, bundle, policy, bundle.config_set, options);

        py::dict report;
        const auto& r = result.report;
        report["task_count"] = r.task_count;
        report["total_actual_cost"] = r.total_actual_cost;
        report["total_predicted_cost"] = r.total_predicted_cost;
        report["cost_prediction_error_pct"] = r.cost_prediction_error_pct;
        report["pct_deadlines_violated"] = r.pct_deadlines_violated;
        report["avg_violation_ms"] = r.avg_violation_ms;
        report["avg_actual_latency_ms"] = r.avg_actual_latency_ms;
        report["avg_predicted_latency_ms"] = r.avg_predicted_latency_ms;
        report["latency_prediction_error_pct"] = r.latency_prediction_error_pct;
        report["pct_constraints_violated"] = r.pct_constraints_violated;
        report["pct_budget_used"] = r.pct_budget_used;
        report["warm_cold_mismatches"] = r.warm_cold_mismatches;
        report["edge_execution_count"] = r.edge_execution_count;

        py::list placements;
        for (const auto& o : result.outcomes) {
          py::dict row;
          row["input_id"] = o.input_id;
          row["config"] = to_string(o.config);
          row["predicted_total_ms"] = o.predicted.total_ms;
          row["actual_total_ms"] = o.actual_total_ms;
          row["actual_cost_usd"] = o.actual_cost_usd;
          placements.append(row);
        }
        return py::make_tuple(placements, report);
      },
      py::arg("bundle_path"), py::arg("workload_path"), py::arg("policy_kind") = "min_latency",
      py::arg("deadline_ms") = 0.0, py::arg("budget_usd_per_task") = 0.0, py::arg("alpha") = 0.0,
      py::arg("noise_sigma") = 0.0, py::arg("seed") = 0);

  m.def("default_config_universe", &default_config_universe);
}
