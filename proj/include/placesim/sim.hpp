#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "placesim/engine.hpp"
#include "placesim/models.hpp"
#include "placesim/pricing.hpp"

namespace placesim {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SimMode { Trace, Generative };

// Multiplicative lognormal noise sigmas for generative actuals; 0 means the
// actual equals the prediction exactly.
struct NoiseSpec {
  double upld = 0.0;
  double start = 0.0;
  double comp = 0.0;
  double store = 0.0;
  double iotup = 0.0;
  double edge_comp = 0.0;

  static NoiseSpec uniform(double sigma) { return {sigma, sigma, sigma, sigma, sigma, sigma}; }
};

struct SimSeeds {
  std::uint64_t sim = 0;
};

struct SimOutcome {
  std::string input_id;
  ContainerConfig config;
  Prediction predicted;
  LatencyBreakdown actual;
  double actual_total_ms = 0.0;
  double actual_cost_usd = 0.0;
  StartType start_type_actual = StartType::Warm;  // cloud only
  bool deadline_violated = false;
  bool budget_violated = false;
};

struct MetricsReport {
  std::size_t task_count = 0;
  double total_actual_cost = 0.0;
  double total_predicted_cost = 0.0;
  double cost_prediction_error_pct = 0.0;
  double pct_deadlines_violated = 0.0;
  double avg_violation_ms = 0.0;  // over violating tasks only
  double avg_actual_latency_ms = 0.0;
  double avg_predicted_latency_ms = 0.0;
  double latency_prediction_error_pct = 0.0;
  double pct_constraints_violated = 0.0;
  double pct_budget_used = 0.0;
  std::size_t warm_cold_mismatches = 0;
  std::size_t edge_execution_count = 0;
};

struct SimResult {
  std::vector<SimOutcome> outcomes;
  MetricsReport report;
};

// Ground truth for actual execution; the CIL mirror driven by actual times
// and per-container sampled idle lifetimes.
struct GroundTruthContainer {
  double busy_until_ms = 0.0;
  double last_completion_ms = 0.0;
  double death_time_ms = 0.0;
  double t_idl_sample_ms = 0.0;
};

struct GroundTruthPool {
  std::map<int, std::vector<GroundTruthContainer>> per_config;
};

struct SimOptions {
  SimMode mode = SimMode::Trace;
  const std::vector<TraceRow>* trace = nullptr;  // required in trace mode
  NoiseSpec noise;
  SimSeeds seeds;
  PricingPolicy pricing;
};

// Actual component times for one execution. Trace mode reads the row (cold
// ground truth replaces the start with a sampled cold start); generative mode
// applies multiplicative noise to the model predictions. queue_wait is left 0.
LatencyBreakdown actuals_for(const InputItem& input, const ContainerConfig& config, SimMode mode,
                             const TraceRow* row, const PerfModelBundle& bundle,
                             const NoiseSpec& noise, StartType ground_truth_start, Rng& rng);

SimResult run(const Workload& workload, const PerfModelBundle& bundle, const PolicySpec& policy,
              const std::vector<ContainerConfig>& config_set, const SimOptions& options);

std::size_t warm_cold_mismatches(const std::vector<SimOutcome>& outcomes);

MetricsReport compute_metrics(const std::vector<SimOutcome>& outcomes, const PolicySpec& policy);

std::string outcomes_to_csv(const std::vector<SimOutcome>& outcomes);
std::string report_to_json(const MetricsReport& report);

}  // namespace placesim
