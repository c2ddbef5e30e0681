#pragma once

#include <map>
#include <vector>

#include "placesim/models.hpp"
#include "placesim/pricing.hpp"
#include "placesim/types.hpp"

namespace placesim {

// Belief about one live cloud container. Idle at time t iff
// busy_until_ms <= t < death_time_ms.
struct ContainerRecord {
  double busy_until_ms = 0.0;
  double last_completion_ms = 0.0;
  double death_time_ms = 0.0;

  bool idle_at(double t_ms) const { return t_ms >= busy_until_ms && t_ms < death_time_ms; }
  bool dead_at(double t_ms) const { return death_time_ms < t_ms; }
};

// Container information list: the Predictor's belief state, per cloud config.
struct CIL {
  std::map<int, std::vector<ContainerRecord>> per_config;  // keyed by memory_mb

  // Index of the idle record with the most recent completion, or -1.
  static int pick_idle(const std::vector<ContainerRecord>& records, double t_ms);
};

enum class PredictedStart { Warm, Cold, EdgeNA };

struct LatencyBreakdown {
  double upld_ms = 0.0;
  double start_ms = 0.0;
  double comp_ms = 0.0;
  double iotup_ms = 0.0;
  double store_ms = 0.0;
  double queue_wait_ms = 0.0;

  double total() const {
    return upld_ms + start_ms + comp_ms + iotup_ms + store_ms + queue_wait_ms;
  }
};

struct Prediction {
  ContainerConfig config;
  PredictedStart start_type = PredictedStart::EdgeNA;
  LatencyBreakdown breakdown;
  double total_ms = 0.0;
  double cost_usd = 0.0;
};

// One prediction per config in bundle.config_set, edge first. Cloud start
// type is warm iff an idle record exists at the predicted trigger time
// (now + predicted upload). Does not mutate the CIL.
std::vector<Prediction> predict(const InputItem& input, double now_ms,
                                const PerfModelBundle& bundle, const CIL& cil,
                                double edge_queue_wait_ms, const PricingPolicy& pricing);

// Applies a cloud dispatch to the CIL: cold appends a record, warm reuses the
// idle record with the most recent completion. Then prunes records whose
// death time precedes now. Edge dispatches must not be passed here.
void update_cil(CIL& cil, const ContainerConfig& config, double now_ms,
                const Prediction& prediction, double t_idl_ms);

}  // namespace placesim
