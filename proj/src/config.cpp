#include "placesim/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace placesim {

using nlohmann::json;

std::vector<ContainerConfig> default_config_universe() {
  std::vector<ContainerConfig> universe{ContainerConfig::edge()};
  for (int mb = 640; mb <= 2944; mb += 128) universe.push_back(ContainerConfig::cloud(mb));
  return universe;
}

namespace {

std::vector<ContainerConfig> parse_config_list(const json& j) {
  std::vector<ContainerConfig> configs;
  for (const auto& item : j) {
    if (item.is_string()) {
      configs.push_back(parse_config(item.get<std::string>()));
    } else {
      configs.push_back(ContainerConfig::cloud(item.get<int>()));
    }
  }
  return configs;
}

PolicySpec parse_policy(const json& j) {
  PolicySpec policy;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "min_cost") {
    policy.kind = PolicyKind::MinCost;
    policy.deadline_ms = j.at("deadline_ms").get<double>();
    if (!(policy.deadline_ms > 0.0)) throw ConfigError("policy.deadline_ms must be > 0");
  } else if (kind == "min_latency") {
    policy.kind = PolicyKind::MinLatency;
    policy.budget_usd_per_task = j.at("budget_usd_per_task").get<double>();
    policy.alpha = j.value("alpha", 0.0);
    if (policy.budget_usd_per_task < 0.0) {
      throw ConfigError("policy.budget_usd_per_task must be >= 0");
    }
    if (policy.alpha < 0.0 || policy.alpha > 1.0) {
      throw ConfigError("policy.alpha must be in [0, 1]");
    }
  } else {
    throw ConfigError("policy.kind must be 'min_cost' or 'min_latency'");
  }
  return policy;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }

  RunConfig config;
  try {
    if (j.contains("paths")) {
      const auto& p = j.at("paths");
      config.trace_path = p.value("trace", "");
      config.workload_path = p.value("workload", "");
      config.bundle_path = p.value("bundle", "");
      config.out_dir = p.value("out_dir", ".");
    }
    if (j.contains("policy")) config.policy = parse_policy(j.at("policy"));
    if (j.contains("pricing")) {
      const auto& p = j.at("pricing");
      config.pricing.usd_per_gb_s = p.value("usd_per_gb_s", config.pricing.usd_per_gb_s);
      config.pricing.quantum_ms = p.value("quantum_ms", config.pricing.quantum_ms);
      config.pricing.per_request_usd = p.value("per_request_usd", config.pricing.per_request_usd);
      config.pricing.gb_divisor_mb = p.value("gb_divisor_mb", config.pricing.gb_divisor_mb);
      if (config.pricing.quantum_ms <= 0 || config.pricing.gb_divisor_mb <= 0 ||
          config.pricing.usd_per_gb_s <= 0.0 || config.pricing.per_request_usd < 0.0) {
        throw ConfigError("invalid pricing section");
      }
    }
    if (j.contains("arrivals")) {
      const auto& a = j.at("arrivals");
      config.arrivals_from_spec = true;
      const std::string mode = a.value("mode", "fixed");
      if (mode == "fixed") {
        config.arrivals.mode = ArrivalMode::Fixed;
      } else if (mode == "poisson") {
        config.arrivals.mode = ArrivalMode::Poisson;
      } else {
        throw ConfigError("arrivals.mode must be 'fixed' or 'poisson'");
      }
      config.arrivals.rate_per_s = a.at("rate_per_s").get<double>();
      if (!(config.arrivals.rate_per_s > 0.0)) throw ConfigError("arrivals.rate_per_s must be > 0");
      if (a.contains("count")) config.arrivals.count = a.at("count").get<std::size_t>();
      config.arrivals.seed = a.value("seed", 0);
    }
    if (j.contains("config_set")) {
      const auto& c = j.at("config_set");
      if (c.is_string() && c.get<std::string>() == "derive") {
        config.derive_configs = true;
      } else {
        config.config_set = parse_config_list(c);
      }
    }
    if (j.contains("config_universe")) {
      config.config_universe = parse_config_list(j.at("config_universe"));
    }
    if (j.contains("mode")) {
      const std::string mode = j.at("mode").get<std::string>();
      if (mode == "trace") {
        config.mode = SimMode::Trace;
      } else if (mode == "generative") {
        config.mode = SimMode::Generative;
      } else {
        throw ConfigError("mode must be 'trace' or 'generative'");
      }
    }
    if (j.contains("noise")) {
      const auto& n = j.at("noise");
      if (n.contains("sigma")) config.noise = NoiseSpec::uniform(n.at("sigma").get<double>());
      config.noise.upld = n.value("upld", config.noise.upld);
      config.noise.start = n.value("start", config.noise.start);
      config.noise.comp = n.value("comp", config.noise.comp);
      config.noise.store = n.value("store", config.noise.store);
      config.noise.iotup = n.value("iotup", config.noise.iotup);
      config.noise.edge_comp = n.value("edge_comp", config.noise.edge_comp);
    }
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      config.seeds.sim = s.value("sim", 0);
      config.train.seed = s.value("train", config.train.seed);
      config.arrivals.seed = s.value("arrivals", config.arrivals.seed);
    }
    if (j.contains("train")) {
      const auto& t = j.at("train");
      config.train.ridge_penalty = t.value("ridge_penalty", config.train.ridge_penalty);
      config.train.upload_gbrt = t.value("upload_gbrt", config.train.upload_gbrt);
      config.train.holdout_fraction = t.value("holdout_fraction", config.train.holdout_fraction);
      config.train.cv_folds = t.value("cv_folds", config.train.cv_folds);
      if (t.contains("t_idl_ms")) config.train.t_idl_ms = t.at("t_idl_ms").get<double>();
      config.train.t_idl_stddev_ms = t.value("t_idl_stddev_ms", config.train.t_idl_stddev_ms);
      if (t.contains("cold_start_mean_ms")) {
        config.train.cold_start_mean_ms = t.at("cold_start_mean_ms").get<double>();
      }
      if (t.contains("cold_start_stddev_ms")) {
        config.train.cold_start_stddev_ms = t.at("cold_start_stddev_ms").get<double>();
      }
      auto parse_hyper = [](const json& h) {
        GbrtHyper hyper;
        hyper.n_trees = h.value("n_trees", hyper.n_trees);
        hyper.max_depth = h.value("max_depth", hyper.max_depth);
        hyper.learning_rate = h.value("learning_rate", hyper.learning_rate);
        hyper.subsample_fraction = h.value("subsample_fraction", hyper.subsample_fraction);
        hyper.min_leaf = h.value("min_leaf", hyper.min_leaf);
        return hyper;
      };
      if (t.contains("gbrt")) config.train.gbrt = parse_hyper(t.at("gbrt"));
      if (t.contains("gbrt_grid")) {
        for (const auto& h : t.at("gbrt_grid")) config.train.gbrt_grid.push_back(parse_hyper(h));
      }
      if (t.contains("config_set")) {
        config.train.config_set = parse_config_list(t.at("config_set"));
      }
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      SweepSpec sweep;
      const std::string parameter = s.at("parameter").get<std::string>();
      if (parameter == "alpha") {
        sweep.parameter = SweepParameter::Alpha;
      } else if (parameter == "deadline_ms") {
        sweep.parameter = SweepParameter::DeadlineMs;
      } else {
        throw ConfigError("sweep.parameter must be 'alpha' or 'deadline_ms'");
      }
      sweep.values = s.at("values").get<std::vector<double>>();
      config.sweep = std::move(sweep);
    }
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config;
}

}  // namespace placesim
