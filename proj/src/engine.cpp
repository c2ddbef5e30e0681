#include "placesim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace placesim {

double edge_queue_wait(const EngineState& state, double now_ms) {
  double wait = std::max(0.0, state.edge_busy_until_ms - now_ms);
  if (!state.edge_running) wait = 0.0;
  for (const auto& task : state.edge_queue) wait += task.predicted_comp_ms;
  return wait;
}

void enqueue_edge(EngineState& state, const InputItem& input, double predicted_comp_ms,
                  double now_ms) {
  if (predicted_comp_ms < 0.0) {
    throw std::invalid_argument("enqueue_edge: negative predicted_comp_ms");
  }
  EdgeTask task{input.id, predicted_comp_ms, now_ms};
  if (!state.edge_running && now_ms >= state.edge_busy_until_ms) {
    state.edge_running = task;
    state.edge_busy_until_ms = now_ms + predicted_comp_ms;
  } else {
    state.edge_queue.push_back(std::move(task));
  }
}

void complete_edge(EngineState& state, double now_ms) {
  if (!state.edge_running) {
    throw StateError("complete_edge: executor is idle and the queue is empty");
  }
  if (now_ms < state.edge_busy_until_ms) {
    throw StateError("complete_edge: completion before predicted busy end");
  }
  state.edge_running.reset();
  if (!state.edge_queue.empty()) {
    state.edge_running = state.edge_queue.front();
    state.edge_queue.pop_front();
    state.edge_busy_until_ms = now_ms + state.edge_running->predicted_comp_ms;
  } else {
    state.edge_busy_until_ms = now_ms;
  }
}

namespace {

// Tie-break key: lower memory wins among clouds, edge sorts last.
double memory_key(const ContainerConfig& config) {
  return config.is_edge() ? std::numeric_limits<double>::infinity()
                          : static_cast<double>(config.memory_mb);
}

}  // namespace

PlacementDecision decide_min_latency(const std::vector<Prediction>& predictions,
                                     EngineState& state, const PolicySpec& policy) {
  if (policy.kind != PolicyKind::MinLatency) {
    throw std::invalid_argument("decide_min_latency: wrong policy kind");
  }
  const double allowance = policy.budget_usd_per_task + policy.alpha * state.surplus_usd;
  PlacementDecision decision;
  decision.allowance_usd = allowance;
  const Prediction* best = nullptr;
  for (const auto& p : predictions) {
    if (p.cost_usd > allowance) continue;
    decision.feasible_set.push_back(p.config);
    if (!best ||
        std::tie(p.total_ms, p.cost_usd) < std::tie(best->total_ms, best->cost_usd) ||
        (p.total_ms == best->total_ms && p.cost_usd == best->cost_usd &&
         memory_key(p.config) < memory_key(best->config))) {
      best = &p;
    }
  }
  if (!best) {
    // Unreachable when predictions include the edge (cost 0).
    throw std::logic_error("decide_min_latency: empty feasible set");
  }
  decision.config = best->config;
  decision.prediction = *best;
  state.surplus_usd += policy.budget_usd_per_task - best->cost_usd;
  return decision;
}

PlacementDecision decide_min_cost(const std::vector<Prediction>& predictions, EngineState& state,
                                  const PolicySpec& policy) {
  if (policy.kind != PolicyKind::MinCost) {
    throw std::invalid_argument("decide_min_cost: wrong policy kind");
  }
  (void)state;
  PlacementDecision decision;
  const Prediction* best = nullptr;
  const Prediction* edge = nullptr;
  for (const auto& p : predictions) {
    if (p.config.is_edge()) edge = &p;
    if (p.total_ms > policy.deadline_ms) continue;
    decision.feasible_set.push_back(p.config);
    if (!best ||
        std::tie(p.cost_usd, p.total_ms) < std::tie(best->cost_usd, best->total_ms) ||
        (p.cost_usd == best->cost_usd && p.total_ms == best->total_ms &&
         memory_key(p.config) < memory_key(best->config))) {
      best = &p;
    }
  }
  if (!best) {
    // No configuration meets the deadline; fall back to the edge queue.
    if (!edge) throw std::logic_error("decide_min_cost: predictions lack an edge entry");
    decision.config = edge->config;
    decision.prediction = *edge;
    return decision;
  }
  decision.config = best->config;
  decision.prediction = *best;
  return decision;
}

PlacementDecision decide(const std::vector<Prediction>& predictions, EngineState& state,
                         const PolicySpec& policy) {
  return policy.kind == PolicyKind::MinLatency ? decide_min_latency(predictions, state, policy)
                                               : decide_min_cost(predictions, state, policy);
}

std::vector<ContainerConfig> derive_config_set(const Workload& workload,
                                               const PerfModelBundle& bundle,
                                               const PolicySpec& policy,
                                               const std::vector<ContainerConfig>& universe,
                                               const PricingPolicy& pricing) {
  PerfModelBundle full = bundle;
  full.config_set = universe;
  const bool has_edge = std::any_of(universe.begin(), universe.end(),
                                    [](const ContainerConfig& c) { return c.is_edge(); });
  if (!has_edge) full.config_set.insert(full.config_set.begin(), ContainerConfig::edge());

  CIL cil;
  EngineState state;
  std::vector<ContainerConfig> selected{ContainerConfig::edge()};

  // Predicted-timeline edge completions pending, ordered FIFO by time.
  for (const auto& input : workload.items) {
    const double now = input.arrival_time_ms;
    while (state.edge_running && state.edge_busy_until_ms <= now) {
      complete_edge(state, state.edge_busy_until_ms);
    }
    const auto predictions = predict(input, now, full, cil, edge_queue_wait(state, now), pricing);
    const auto decision = decide(predictions, state, policy);
    if (decision.config.is_cloud()) {
      update_cil(cil, decision.config, now, decision.prediction, full.t_idl_ms);
    } else {
      enqueue_edge(state, input, decision.prediction.breakdown.comp_ms, now);
    }
    if (std::find(selected.begin(), selected.end(), decision.config) == selected.end()) {
      selected.push_back(decision.config);
    }
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

}  // namespace placesim
