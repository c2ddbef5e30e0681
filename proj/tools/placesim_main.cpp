#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "placesim/config.hpp"
#include "placesim/engine.hpp"
#include "placesim/models.hpp"
#include "placesim/sim.hpp"
#include "placesim/workload.hpp"

namespace fs = std::filesystem;
using namespace placesim;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> mode;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Run configuration JSON")->required();
  cmd->add_option("--seed", flags.seed, "Override all seeds");
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_option("--mode", flags.mode, "Simulation mode: trace|generative")
      ->check(CLI::IsMember({"trace", "generative"}));
}

RunConfig load_config_with_overrides(const CommonFlags& flags) {
  RunConfig config = load_run_config(flags.config_path);
  if (flags.seed) {
    config.seeds.sim = *flags.seed;
    config.train.seed = *flags.seed;
    config.arrivals.seed = *flags.seed;
  }
  if (flags.out_dir) config.out_dir = *flags.out_dir;
  if (flags.mode) config.mode = *flags.mode == "trace" ? SimMode::Trace : SimMode::Generative;
  return config;
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("paths.") + what + " is required");
  if (!fs::exists(path)) {
    throw ConfigError(std::string(what) + " file does not exist: " + path);
  }
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
  }
  fs::rename(tmp, path);
}

Workload load_workload_with_arrivals(const RunConfig& config) {
  require_file(config.workload_path, "workload");
  Workload workload = load_workload(config.workload_path);
  if (config.arrivals_from_spec) {
    auto& spec = config.arrivals;
    const std::size_t n = spec.count.value_or(workload.items.size());
    if (n > workload.items.size()) {
      throw ConfigError("arrivals.count exceeds the workload size");
    }
    workload.items.resize(n);
    const auto times = generate_arrivals(n, spec.mode, spec.rate_per_s, spec.seed);
    for (std::size_t i = 0; i < n; ++i) workload.items[i].arrival_time_ms = times[i];
  }
  return workload;
}

std::map<std::string, double> sizes_of(const Workload& workload) {
  std::map<std::string, double> sizes;
  for (const auto& item : workload.items) sizes[item.id] = item.size;
  return sizes;
}

std::vector<ContainerConfig> resolve_config_set(const RunConfig& config,
                                                const PerfModelBundle& bundle,
                                                const Workload& workload) {
  if (config.derive_configs) {
    const auto universe =
        config.config_universe.empty() ? bundle.config_set : config.config_universe;
    return derive_config_set(workload, bundle, config.policy, universe, config.pricing);
  }
  if (!config.config_set.empty()) return config.config_set;
  return bundle.config_set;
}

int cmd_train(const CommonFlags& flags) {
  const RunConfig config = load_config_with_overrides(flags);
  require_file(config.trace_path, "trace");
  require_file(config.workload_path, "workload");
  const auto trace = load_trace(config.trace_path);
  const Workload workload = load_workload(config.workload_path);
  const auto result = train_bundle(trace, sizes_of(workload), config.train);

  fs::create_directories(config.out_dir);
  const fs::path bundle_path = config.bundle_path.empty()
                                   ? fs::path(config.out_dir) / "model.json"
                                   : fs::path(config.bundle_path);
  write_file_atomic(bundle_path, bundle_to_json(result.bundle) + "\n");

  nlohmann::json mape_json;
  std::cout << "component MAPE (%):\n";
  for (const auto& [component, value] : result.report.component_mape) {
    std::printf("  %-14s %8.3f\n", component.c_str(), value);
    mape_json[component] = value;
  }
  write_file_atomic(fs::path(config.out_dir) / "train_report.json", mape_json.dump(2) + "\n");
  std::cout << "model written to " << bundle_path.string() << "\n";
  return 0;
}

SimResult run_once(const RunConfig& config, const PerfModelBundle& bundle,
                   const Workload& workload, const std::vector<ContainerConfig>& config_set,
                   const std::vector<TraceRow>* trace) {
  SimOptions options;
  options.mode = config.mode;
  options.trace = trace;
  options.noise = config.noise;
  options.seeds = config.seeds;
  options.pricing = config.pricing;
  return run(workload, bundle, config.policy, config_set, options);
}

int cmd_simulate(const CommonFlags& flags) {
  const RunConfig config = load_config_with_overrides(flags);
  require_file(config.bundle_path, "bundle");
  const PerfModelBundle bundle = load_bundle(config.bundle_path);
  const Workload workload = load_workload_with_arrivals(config);

  std::vector<TraceRow> trace;
  if (config.mode == SimMode::Trace) {
    require_file(config.trace_path, "trace");
    trace = load_trace(config.trace_path);
  }
  const auto config_set = resolve_config_set(config, bundle, workload);
  const SimResult result = run_once(config, bundle, workload, config_set,
                                    config.mode == SimMode::Trace ? &trace : nullptr);

  fs::create_directories(config.out_dir);
  write_file_atomic(fs::path(config.out_dir) / "outcomes.csv", outcomes_to_csv(result.outcomes));
  write_file_atomic(fs::path(config.out_dir) / "report.json",
                    report_to_json(result.report) + "\n");
  std::cout << report_to_json(result.report) << "\n";
  return 0;
}

int cmd_sweep(const CommonFlags& flags) {
  RunConfig config = load_config_with_overrides(flags);
  if (!config.sweep || config.sweep->values.empty()) {
    throw ConfigError("sweep requires a nonempty sweep.values range");
  }
  require_file(config.bundle_path, "bundle");
  const PerfModelBundle bundle = load_bundle(config.bundle_path);
  const Workload workload = load_workload_with_arrivals(config);

  std::vector<TraceRow> trace;
  if (config.mode == SimMode::Trace) {
    require_file(config.trace_path, "trace");
    trace = load_trace(config.trace_path);
  }
  const auto config_set = resolve_config_set(config, bundle, workload);

  fs::create_directories(config.out_dir);
  const bool is_alpha = config.sweep->parameter == SweepParameter::Alpha;
  std::ostringstream summary;
  summary << "point,parameter,value,avg_actual_latency_ms,avg_predicted_latency_ms,"
             "total_actual_cost,total_predicted_cost,pct_deadlines_violated,"
             "pct_constraints_violated,pct_budget_used,edge_execution_count,"
             "warm_cold_mismatches\n";
  for (std::size_t i = 0; i < config.sweep->values.size(); ++i) {
    const double value = config.sweep->values[i];
    RunConfig point = config;
    if (is_alpha) {
      point.policy.alpha = value;
    } else {
      point.policy.deadline_ms = value;
    }
    const SimResult result = run_once(point, bundle, workload, config_set,
                                      config.mode == SimMode::Trace ? &trace : nullptr);
    const auto& r = result.report;
    char line[512];
    std::snprintf(line, sizeof(line), "%zu,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%zu\n",
                  i, is_alpha ? "alpha" : "deadline_ms", value, r.avg_actual_latency_ms,
                  r.avg_predicted_latency_ms, r.total_actual_cost, r.total_predicted_cost,
                  r.pct_deadlines_violated, r.pct_constraints_violated, r.pct_budget_used,
                  r.edge_execution_count, r.warm_cold_mismatches);
    summary << line;
    write_file_atomic(fs::path(config.out_dir) / ("report_" + std::to_string(i) + ".json"),
                      report_to_json(r) + "\n");
    write_file_atomic(fs::path(config.out_dir) / ("outcomes_" + std::to_string(i) + ".csv"),
                      outcomes_to_csv(result.outcomes));
  }
  write_file_atomic(fs::path(config.out_dir) / "summary.csv", summary.str());
  std::cout << summary.str();
  return 0;
}

int cmd_derive_configs(const CommonFlags& flags) {
  const RunConfig config = load_config_with_overrides(flags);
  require_file(config.bundle_path, "bundle");
  const PerfModelBundle bundle = load_bundle(config.bundle_path);
  const Workload workload = load_workload_with_arrivals(config);
  const auto universe =
      config.config_universe.empty() ? default_config_universe() : config.config_universe;
  const auto selected =
      derive_config_set(workload, bundle, config.policy, universe, config.pricing);

  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : selected) {
    j.push_back(to_string(c));
    std::cout << to_string(c) << "\n";
  }
  fs::create_directories(config.out_dir);
  write_file_atomic(fs::path(config.out_dir) / "config_set.json", j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"placesim: edge-cloud task placement simulator"};
  app.require_subcommand(1);

  CommonFlags train_flags, simulate_flags, sweep_flags, derive_flags;
  add_common_flags(app.add_subcommand("train", "Train performance models from a trace"),
                   train_flags);
  add_common_flags(app.add_subcommand("simulate", "Run one simulation"), simulate_flags);
  add_common_flags(app.add_subcommand("sweep", "Sweep alpha or deadline over a range"),
                   sweep_flags);
  add_common_flags(app.add_subcommand("derive-configs",
                                      "Derive the selected configuration set from a workload"),
                   derive_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("train")) return cmd_train(train_flags);
    if (app.got_subcommand("simulate")) return cmd_simulate(simulate_flags);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_flags);
    if (app.got_subcommand("derive-configs")) return cmd_derive_configs(derive_flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
