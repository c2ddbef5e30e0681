#pragma once

#include <optional>
#include <string>
#include <vector>

#include "placesim/engine.hpp"
#include "placesim/models.hpp"
#include "placesim/sim.hpp"
#include "placesim/workload.hpp"

namespace placesim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArrivalSpec {
  ArrivalMode mode = ArrivalMode::Fixed;
  double rate_per_s = 1.0;
  std::optional<std::size_t> count;  // default: workload size
  std::uint64_t seed = 0;
};

enum class SweepParameter { Alpha, DeadlineMs };

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Alpha;
  std::vector<double> values;
};

struct RunConfig {
  std::string trace_path;
  std::string workload_path;
  std::string bundle_path;
  std::string out_dir = ".";

  PolicySpec policy;
  PricingPolicy pricing;
  ArrivalSpec arrivals;
  bool arrivals_from_spec = false;  // regenerate arrival times even if the file has them

  // Cloud configs to simulate with; empty means derive from the workload.
  std::vector<ContainerConfig> config_set;
  bool derive_configs = false;
  std::vector<ContainerConfig> config_universe;  // for derive; default 19-config set

  SimMode mode = SimMode::Trace;
  NoiseSpec noise;
  SimSeeds seeds;
  TrainOptions train;
  std::optional<SweepSpec> sweep;
};

// The 19 cloud memory configurations studied alongside the edge executor.
std::vector<ContainerConfig> default_config_universe();

RunConfig load_run_config(const std::string& path);

}  // namespace placesim
