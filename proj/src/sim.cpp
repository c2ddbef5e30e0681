#include "placesim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "placesim/rng.hpp"

namespace placesim {

namespace {

double clamp0(double x) { return x < 0.0 ? 0.0 : x; }

std::string trace_key(const std::string& input_id, const ContainerConfig& config) {
  return input_id + "|" + to_string(config);
}

const char* start_name(PredictedStart s) {
  switch (s) {
    case PredictedStart::Warm:
      return "warm";
    case PredictedStart::Cold:
      return "cold";
    default:
      return "n/a";
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

LatencyBreakdown actuals_for(const InputItem& input, const ContainerConfig& config, SimMode mode,
                             const TraceRow* row, const PerfModelBundle& bundle,
                             const NoiseSpec& noise, StartType ground_truth_start, Rng& rng) {
  LatencyBreakdown actual;
  if (config.is_cloud()) {
    if (mode == SimMode::Trace) {
      if (!row) {
        throw SimError("no trace row for input '" + input.id + "' config " + to_string(config));
      }
      actual.upld_ms = *row->upld_ms;
      actual.comp_ms = row->comp_ms;
      actual.store_ms = row->store_ms;
      actual.start_ms = ground_truth_start == StartType::Cold
                            ? clamp0(bundle.cold_start_dist.sample(rng))
                            : row->start_ms;
    } else {
      actual.upld_ms = bundle.predict_upload(input.size) * lognormal_factor(rng, noise.upld);
      actual.start_ms =
          (ground_truth_start == StartType::Cold ? clamp0(bundle.cold_start_dist.sample(rng))
                                                 : bundle.warm_start.predict()) *
          lognormal_factor(rng, noise.start);
      actual.comp_ms =
          bundle.cloud_compute.predict(input.size, static_cast<double>(config.memory_mb)) *
          lognormal_factor(rng, noise.comp);
      actual.store_ms = bundle.cloud_store.predict() * lognormal_factor(rng, noise.store);
    }
  } else {
    if (mode == SimMode::Trace) {
      if (!row) {
        throw SimError("no trace row for input '" + input.id + "' config edge");
      }
      actual.comp_ms = row->comp_ms;
      actual.iotup_ms = row->iotup_ms.value_or(0.0);
      actual.store_ms = row->store_ms;
    } else {
      actual.comp_ms = bundle.edge_compute.predict(input.size) *
                       lognormal_factor(rng, noise.edge_comp);
      actual.iotup_ms = bundle.iot_upload.predict() * lognormal_factor(rng, noise.iotup);
      actual.store_ms = bundle.edge_store.predict() * lognormal_factor(rng, noise.store);
    }
  }
  return actual;
}

SimResult run(const Workload& workload, const PerfModelBundle& bundle, const PolicySpec& policy,
              const std::vector<ContainerConfig>& config_set, const SimOptions& options) {
  if (workload.items.empty()) throw SimError("run: empty workload");
  if (options.mode == SimMode::Trace && !options.trace) {
    throw SimError("run: trace mode requires a trace");
  }

  // The edge executor is always available as a placement target.
  PerfModelBundle run_bundle = bundle;
  run_bundle.config_set = config_set;
  const bool has_edge = std::any_of(config_set.begin(), config_set.end(),
                                    [](const ContainerConfig& c) { return c.is_edge(); });
  if (!has_edge) {
    run_bundle.config_set.insert(run_bundle.config_set.begin(), ContainerConfig::edge());
  }

  std::map<std::string, const TraceRow*> rows;
  if (options.trace) {
    for (const auto& row : *options.trace) rows[trace_key(row.input_id, row.config)] = &row;
  }
  auto find_row = [&](const InputItem& input, const ContainerConfig& config) -> const TraceRow* {
    const auto it = rows.find(trace_key(input.id, config));
    return it == rows.end() ? nullptr : it->second;
  };

  Rng rng(options.seeds.sim);
  CIL cil;
  EngineState state;
  GroundTruthPool pool;
  double gt_edge_busy_until = 0.0;

  std::vector<SimOutcome> outcomes;
  outcomes.reserve(workload.items.size());

  for (const auto& input : workload.items) {
    const double now = input.arrival_time_ms;

    // Predicted-timeline edge completions due at or before this arrival.
    while (state.edge_running && state.edge_busy_until_ms <= now) {
      complete_edge(state, state.edge_busy_until_ms);
    }

    const auto predictions =
        predict(input, now, run_bundle, cil, edge_queue_wait(state, now), options.pricing);
    const auto decision = decide(predictions, state, policy);

    SimOutcome outcome;
    outcome.input_id = input.id;
    outcome.config = decision.config;
    outcome.predicted = decision.prediction;

    if (decision.config.is_cloud()) {
      update_cil(cil, decision.config, now, decision.prediction, run_bundle.t_idl_ms);

      const TraceRow* row =
          options.mode == SimMode::Trace ? find_row(input, decision.config) : nullptr;
      double actual_upld = 0.0;
      if (options.mode == SimMode::Trace) {
        if (!row) {
          throw SimError("no trace row for input '" + input.id + "' config " +
                         to_string(decision.config));
        }
        actual_upld = *row->upld_ms;
      } else {
        actual_upld =
            run_bundle.predict_upload(input.size) * lognormal_factor(rng, options.noise.upld);
      }
      const double trigger = now + actual_upld;

      auto& containers = pool.per_config[decision.config.memory_mb];
      std::erase_if(containers,
                    [now](const GroundTruthContainer& c) { return c.death_time_ms < now; });
      int reuse = -1;
      for (std::size_t i = 0; i < containers.size(); ++i) {
        const auto& c = containers[i];
        if (trigger >= c.busy_until_ms && trigger < c.death_time_ms) {
          if (reuse < 0 || c.last_completion_ms > containers[reuse].last_completion_ms) {
            reuse = static_cast<int>(i);
          }
        }
      }
      outcome.start_type_actual = reuse >= 0 ? StartType::Warm : StartType::Cold;

      LatencyBreakdown actual;
      actual.upld_ms = actual_upld;
      if (options.mode == SimMode::Trace) {
        actual.comp_ms = row->comp_ms;
        actual.store_ms = row->store_ms;
        actual.start_ms = outcome.start_type_actual == StartType::Cold
                              ? clamp0(run_bundle.cold_start_dist.sample(rng))
                              : row->start_ms;
      } else {
        actual.start_ms = (outcome.start_type_actual == StartType::Cold
                               ? clamp0(run_bundle.cold_start_dist.sample(rng))
                               : run_bundle.warm_start.predict()) *
                          lognormal_factor(rng, options.noise.start);
        actual.comp_ms = run_bundle.cloud_compute.predict(
                             input.size, static_cast<double>(decision.config.memory_mb)) *
                         lognormal_factor(rng, options.noise.comp);
        actual.store_ms =
            run_bundle.cloud_store.predict() * lognormal_factor(rng, options.noise.store);
      }

      const double completion = trigger + actual.start_ms + actual.comp_ms;
      if (reuse >= 0) {
        auto& c = containers[reuse];
        c.busy_until_ms = completion;
        c.last_completion_ms = completion;
        c.death_time_ms = completion + c.t_idl_sample_ms;
      } else {
        const double t_idl = clamp0(run_bundle.t_idl_dist.sample(rng));
        containers.push_back({completion, completion, completion + t_idl, t_idl});
      }

      outcome.actual = actual;
      outcome.actual_total_ms = actual.total();
      outcome.actual_cost_usd = cost(actual.comp_ms, decision.config, options.pricing);
    } else {
      enqueue_edge(state, input, decision.prediction.breakdown.comp_ms, now);

      const TraceRow* row =
          options.mode == SimMode::Trace ? find_row(input, ContainerConfig::edge()) : nullptr;
      LatencyBreakdown actual = actuals_for(input, ContainerConfig::edge(), options.mode, row,
                                            run_bundle, options.noise, StartType::Warm, rng);
      const double service_start = std::max(now, gt_edge_busy_until);
      actual.queue_wait_ms = service_start - now;
      gt_edge_busy_until = service_start + actual.comp_ms;

      outcome.start_type_actual = StartType::Warm;  // n/a for edge
      outcome.actual = actual;
      outcome.actual_total_ms = actual.total();
      outcome.actual_cost_usd = 0.0;
    }

    if (policy.kind == PolicyKind::MinCost) {
      outcome.deadline_violated = outcome.actual_total_ms > policy.deadline_ms;
    } else {
      outcome.budget_violated = outcome.actual_cost_usd > decision.allowance_usd;
    }
    outcomes.push_back(std::move(outcome));
  }

  MetricsReport report = compute_metrics(outcomes, policy);
  return {std::move(outcomes), report};
}

std::size_t warm_cold_mismatches(const std::vector<SimOutcome>& outcomes) {
  std::size_t count = 0;
  for (const auto& o : outcomes) {
    if (!o.config.is_cloud()) continue;
    const StartType predicted =
        o.predicted.start_type == PredictedStart::Warm ? StartType::Warm : StartType::Cold;
    if (predicted != o.start_type_actual) ++count;
  }
  return count;
}

MetricsReport compute_metrics(const std::vector<SimOutcome>& outcomes, const PolicySpec& policy) {
  MetricsReport report;
  report.task_count = outcomes.size();
  if (outcomes.empty()) return report;

  double sum_actual_latency = 0.0;
  double sum_predicted_latency = 0.0;
  std::size_t deadline_violations = 0;
  double violation_sum = 0.0;
  std::size_t budget_violations = 0;
  for (const auto& o : outcomes) {
    report.total_actual_cost += o.actual_cost_usd;
    report.total_predicted_cost += o.predicted.cost_usd;
    sum_actual_latency += o.actual_total_ms;
    sum_predicted_latency += o.predicted.total_ms;
    if (o.config.is_edge()) ++report.edge_execution_count;
    if (o.deadline_violated) {
      ++deadline_violations;
      violation_sum += o.actual_total_ms - policy.deadline_ms;
    }
    if (o.budget_violated) ++budget_violations;
  }
  const double n = static_cast<double>(outcomes.size());
  report.avg_actual_latency_ms = sum_actual_latency / n;
  report.avg_predicted_latency_ms = sum_predicted_latency / n;
  if (report.total_actual_cost > 0.0) {
    report.cost_prediction_error_pct =
        std::abs(report.total_actual_cost - report.total_predicted_cost) /
        report.total_actual_cost * 100.0;
  }
  if (report.avg_actual_latency_ms > 0.0) {
    report.latency_prediction_error_pct =
        std::abs(report.avg_actual_latency_ms - report.avg_predicted_latency_ms) /
        report.avg_actual_latency_ms * 100.0;
  }
  if (policy.kind == PolicyKind::MinCost) {
    report.pct_deadlines_violated = static_cast<double>(deadline_violations) / n * 100.0;
    if (deadline_violations > 0) {
      report.avg_violation_ms = violation_sum / static_cast<double>(deadline_violations);
    }
  } else {
    report.pct_constraints_violated = static_cast<double>(budget_violations) / n * 100.0;
    if (policy.budget_usd_per_task > 0.0) {
      report.pct_budget_used =
          report.total_actual_cost / (policy.budget_usd_per_task * n) * 100.0;
    }
  }
  report.warm_cold_mismatches = warm_cold_mismatches(outcomes);
  return report;
}

std::string outcomes_to_csv(const std::vector<SimOutcome>& outcomes) {
  std::ostringstream out;
  out << "input_id,config,predicted_start,actual_start,predicted_total_ms,actual_total_ms,"
         "predicted_cost_usd,actual_cost_usd,actual_upld_ms,actual_start_ms,actual_comp_ms,"
         "actual_iotup_ms,actual_store_ms,actual_queue_wait_ms,deadline_violated,"
         "budget_violated\n";
  for (const auto& o : outcomes) {
    out << o.input_id << ',' << to_string(o.config) << ',' << start_name(o.predicted.start_type)
        << ',' << (o.config.is_cloud() ? to_string(o.start_type_actual) : "n/a") << ','
        << fmt(o.predicted.total_ms) << ',' << fmt(o.actual_total_ms) << ','
        << fmt(o.predicted.cost_usd) << ',' << fmt(o.actual_cost_usd) << ','
        << fmt(o.actual.upld_ms) << ',' << fmt(o.actual.start_ms) << ',' << fmt(o.actual.comp_ms)
        << ',' << fmt(o.actual.iotup_ms) << ',' << fmt(o.actual.store_ms) << ','
        << fmt(o.actual.queue_wait_ms) << ',' << (o.deadline_violated ? 1 : 0) << ','
        << (o.budget_violated ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string report_to_json(const MetricsReport& report) {
  nlohmann::json j{{"task_count", report.task_count},
                   {"total_actual_cost", report.total_actual_cost},
                   {"total_predicted_cost", report.total_predicted_cost},
                   {"cost_prediction_error_pct", report.cost_prediction_error_pct},
                   {"pct_deadlines_violated", report.pct_deadlines_violated},
                   {"avg_violation_ms", report.avg_violation_ms},
                   {"avg_actual_latency_ms", report.avg_actual_latency_ms},
                   {"avg_predicted_latency_ms", report.avg_predicted_latency_ms},
                   {"latency_prediction_error_pct", report.latency_prediction_error_pct},
                   {"pct_constraints_violated", report.pct_constraints_violated},
                   {"pct_budget_used", report.pct_budget_used},
                   {"warm_cold_mismatches", report.warm_cold_mismatches},
                   {"edge_execution_count", report.edge_execution_count}};
  return j.dump(2);
}

}  // namespace placesim
