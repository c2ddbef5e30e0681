#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "placesim/predictor.hpp"

namespace placesim {

struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PolicyKind { MinCost, MinLatency };

struct PolicySpec {
  PolicyKind kind = PolicyKind::MinCost;
  double deadline_ms = 0.0;          // min_cost: per-task deadline
  double budget_usd_per_task = 0.0;  // min_latency: Cmax
  double alpha = 0.0;                // min_latency: surplus scaling, in [0,1]
};

struct EdgeTask {
  std::string input_id;
  double predicted_comp_ms = 0.0;
  double enqueue_time_ms = 0.0;
};

// Decision-loop state: the budget surplus and the Executor's FIFO queue.
// The running task is tracked separately from the waiting queue;
// edge_busy_until_ms is its predicted completion time.
struct EngineState {
  double surplus_usd = 0.0;
  std::deque<EdgeTask> edge_queue;  // waiting tasks, FIFO
  std::optional<EdgeTask> edge_running;
  double edge_busy_until_ms = 0.0;
};

struct PlacementDecision {
  ContainerConfig config;
  Prediction prediction;
  std::vector<ContainerConfig> feasible_set;
  // min_latency: the cost allowance Cmax + alpha * surplus at decision time.
  double allowance_usd = 0.0;
};

// Remaining busy time of the executor plus the predicted compute of every
// waiting task.
double edge_queue_wait(const EngineState& state, double now_ms);

// Starts the task immediately when the executor is idle; otherwise appends
// it to the waiting queue.
void enqueue_edge(EngineState& state, const InputItem& input, double predicted_comp_ms,
                  double now_ms);

// Finishes the running task and promotes the next waiting task, if any.
// Errors when nothing is running or when called before the predicted
// completion time.
void complete_edge(EngineState& state, double now_ms);

// Feasible set M = {config : cost <= Cmax + alpha * surplus}; picks the
// minimum-latency member (ties: lower cost, then lower memory, edge last)
// and updates the surplus by Cmax - cost(selected).
PlacementDecision decide_min_latency(const std::vector<Prediction>& predictions,
                                     EngineState& state, const PolicySpec& policy);

// Feasible set M = {config : predicted total <= deadline}; picks the
// minimum-cost member (ties: lower latency, then lower memory). Empty M
// falls back to the edge queue.
PlacementDecision decide_min_cost(const std::vector<Prediction>& predictions, EngineState& state,
                                  const PolicySpec& policy);

PlacementDecision decide(const std::vector<Prediction>& predictions, EngineState& state,
                         const PolicySpec& policy);

// Replays the decision loop over a workload with every config in `universe`
// available and returns the configs actually selected, edge always included.
// The replay is purely prediction-driven, so no ground-truth state is needed.
std::vector<ContainerConfig> derive_config_set(const Workload& workload,
                                               const PerfModelBundle& bundle,
                                               const PolicySpec& policy,
                                               const std::vector<ContainerConfig>& universe,
                                               const PricingPolicy& pricing);

}  // namespace placesim
