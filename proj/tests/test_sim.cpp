#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "placesim/rng.hpp"
#include "placesim/sim.hpp"

using namespace placesim;

namespace {

// Flat-rate bundle: no upload time, 100 ms cloud compute, warm = cold =
// 100 ms so cold/warm divergence never shifts the timeline, 1000 ms edge
// compute. T_idl is a 500 ms point mass in both the predictor and the
// ground-truth distribution.
PerfModelBundle make_sim_bundle() {
  PerfModelBundle b;
  b.upload = {0.0, 0.0, 0.0};
  b.edge_compute = {1000.0, 0.0, 0.0};
  b.cloud_compute.base_prediction = 100.0;
  b.warm_start = {100.0, 0.0, 1};
  b.cold_start = {100.0, 0.0, 1};
  b.cloud_store = {0.0, 0.0, 1};
  b.edge_store = {583.0, 0.0, 1};
  b.iot_upload = {25.0, 0.0, 1};
  b.t_idl_ms = 500.0;
  b.t_idl_dist = {500.0, 0.0};
  b.cold_start_dist = {100.0, 0.0};
  b.config_set = {ContainerConfig::edge(), ContainerConfig::cloud(1024)};
  return b;
}

Workload arrivals(std::vector<double> times) {
  Workload w;
  for (std::size_t i = 0; i < times.size(); ++i) {
    w.items.push_back({"t" + std::to_string(i), 1e6, times[i]});
  }
  return w;
}

SimOptions generative_options() {
  SimOptions options;
  options.mode = SimMode::Generative;
  return options;
}

}  // namespace

TEST_CASE("single edge task, zero noise: prediction error is exactly 0") {
  const auto bundle = make_sim_bundle();
  PolicySpec policy{PolicyKind::MinCost, 1e9, 0.0, 0.0};
  const auto result =
      run(arrivals({0.0}), bundle, policy, {ContainerConfig::edge()}, generative_options());
  REQUIRE(result.outcomes.size() == 1);
  const auto& o = result.outcomes[0];
  CHECK(o.config == ContainerConfig::edge());
  CHECK(o.actual_total_ms == doctest::Approx(1000 + 25 + 583).epsilon(1e-12));
  CHECK(o.actual_cost_usd == 0.0);
  CHECK(result.report.latency_prediction_error_pct == doctest::Approx(0.0));
  CHECK(result.report.cost_prediction_error_pct == 0.0);
  CHECK(result.report.edge_execution_count == 1);
}

TEST_CASE("two edge tasks 1 ms apart: the second waits ~999 ms") {
  const auto bundle = make_sim_bundle();
  PolicySpec policy{PolicyKind::MinCost, 1e9, 0.0, 0.0};
  const auto result =
      run(arrivals({0.0, 1.0}), bundle, policy, {ContainerConfig::edge()}, generative_options());
  REQUIRE(result.outcomes.size() == 2);
  CHECK(result.outcomes[0].actual.queue_wait_ms == doctest::Approx(0.0));
  CHECK(result.outcomes[1].actual.queue_wait_ms == doctest::Approx(999.0));
  CHECK(result.outcomes[1].actual_total_ms == doctest::Approx(999 + 1000 + 25 + 583));
  // Zero noise: the predicted queue wait is the same 999 ms.
  CHECK(result.outcomes[1].predicted.breakdown.queue_wait_ms == doctest::Approx(999.0));
  CHECK(result.report.latency_prediction_error_pct == doctest::Approx(0.0));
}

// Hand-traced container lifetime with T_idl = 500:
//   t=0    cold, completes 200, container dies at 700
//   t=300  warm (idle 200..700), completes 500, dies at 1000
//   t=600  warm (idle 500..1000), completes 800, dies at 1300
//   t=2000 cold (the container expired at 1300), completes 2200
//   t=2300 warm (idle 2200..2700)
TEST_CASE("five-task warm/cold schedule matches the hand oracle") {
  const auto bundle = make_sim_bundle();
  PolicySpec policy{PolicyKind::MinLatency, 0.0, 1e-3, 0.0};  // cloud always affordable
  const auto result = run(arrivals({0.0, 300.0, 600.0, 2000.0, 2300.0}), bundle, policy,
                          bundle.config_set, generative_options());
  REQUIRE(result.outcomes.size() == 5);
  const std::vector<StartType> expected{StartType::Cold, StartType::Warm, StartType::Warm,
                                        StartType::Cold, StartType::Warm};
  for (int i = 0; i < 5; ++i) {
    CHECK(result.outcomes[i].config == ContainerConfig::cloud(1024));
    CHECK(result.outcomes[i].start_type_actual == expected[i]);
    const auto predicted_warm = result.outcomes[i].predicted.start_type == PredictedStart::Warm;
    CHECK(predicted_warm == (expected[i] == StartType::Warm));
  }
  CHECK(result.report.warm_cold_mismatches == 0);
  // 100 ms billed at 1024 MB, five times.
  CHECK(result.report.total_actual_cost == doctest::Approx(5 * 0.1 * 1.667e-6));
}

TEST_CASE("diverging idle lifetimes force warm/cold mismatches") {
  auto bundle = make_sim_bundle();
  bundle.t_idl_ms = 1e12;          // predictor believes containers never die
  bundle.t_idl_dist = {0.0, 0.0};  // ground truth kills them immediately
  PolicySpec policy{PolicyKind::MinLatency, 0.0, 1e-3, 0.0};
  const auto result = run(arrivals({0.0, 300.0, 600.0, 900.0, 1200.0}), bundle, policy,
                          bundle.config_set, generative_options());
  // First dispatch is cold on both sides; every later one is predicted warm
  // but actually cold.
  CHECK(result.report.warm_cold_mismatches == 4);
}

TEST_CASE("one engineered expiry straddle gives exactly one mismatch") {
  auto bundle = make_sim_bundle();
  bundle.t_idl_dist = {450.0, 0.0};  // ground-truth containers die 50 ms early
  PolicySpec policy{PolicyKind::MinLatency, 0.0, 1e-3, 0.0};
  // First completes at 200: predicted death 700, actual death 650. Arrival
  // at 680 is predicted warm but actually cold.
  const auto result =
      run(arrivals({0.0, 680.0}), bundle, policy, bundle.config_set, generative_options());
  REQUIRE(result.outcomes.size() == 2);
  CHECK(result.outcomes[1].predicted.start_type == PredictedStart::Warm);
  CHECK(result.outcomes[1].start_type_actual == StartType::Cold);
  CHECK(result.report.warm_cold_mismatches == 1);
}

TEST_CASE("trace-mode actuals: warm row verbatim, cold start resampled") {
  const auto bundle = make_sim_bundle();
  TraceRow row;
  row.input_id = "x";
  row.config = ContainerConfig::cloud(1024);
  row.upld_ms = 210.0;
  row.start_ms = 163.0;
  row.start_type = StartType::Warm;
  row.comp_ms = 512.0;
  row.store_ms = 584.0;
  Rng rng(1);

  const auto warm = actuals_for({"x", 1e6, 0.0}, row.config, SimMode::Trace, &row, bundle,
                                NoiseSpec{}, StartType::Warm, rng);
  CHECK(warm.upld_ms == 210.0);
  CHECK(warm.start_ms == 163.0);
  CHECK(warm.comp_ms == 512.0);
  CHECK(warm.store_ms == 584.0);

  auto cold_bundle = bundle;
  cold_bundle.cold_start_dist = {1500.0, 0.0};
  const auto cold = actuals_for({"x", 1e6, 0.0}, row.config, SimMode::Trace, &row, cold_bundle,
                                NoiseSpec{}, StartType::Cold, rng);
  CHECK(cold.start_ms == doctest::Approx(1500.0));
  CHECK(cold.comp_ms == 512.0);  // other components still come from the row
}

TEST_CASE("generative actuals with zero noise equal the predictions") {
  const auto bundle = make_sim_bundle();
  Rng rng(7);
  const auto a = actuals_for({"x", 1e6, 0.0}, ContainerConfig::cloud(1024), SimMode::Generative,
                             nullptr, bundle, NoiseSpec{}, StartType::Warm, rng);
  CHECK(a.upld_ms == doctest::Approx(0.0));
  CHECK(a.start_ms == doctest::Approx(100.0));
  CHECK(a.comp_ms == doctest::Approx(100.0));
  CHECK(a.store_ms == doctest::Approx(0.0));

  const auto e = actuals_for({"x", 1e6, 0.0}, ContainerConfig::edge(), SimMode::Generative,
                             nullptr, bundle, NoiseSpec{}, StartType::Warm, rng);
  CHECK(e.comp_ms == doctest::Approx(1000.0));
  CHECK(e.iotup_ms == doctest::Approx(25.0));
  CHECK(e.store_ms == doctest::Approx(583.0));
}

TEST_CASE("noisy runs are byte-identical given the same seed") {
  const auto bundle = make_sim_bundle();
  PolicySpec policy{PolicyKind::MinLatency, 0.0, 5e-7, 0.5};
  auto options = generative_options();
  options.noise = NoiseSpec::uniform(0.3);
  options.seeds.sim = 42;
  Workload w = arrivals({0, 150, 300, 450, 600, 750, 900, 1050, 1200, 1350});

  const auto a = run(w, bundle, policy, bundle.config_set, options);
  const auto b = run(w, bundle, policy, bundle.config_set, options);
  CHECK(outcomes_to_csv(a.outcomes) == outcomes_to_csv(b.outcomes));
  CHECK(report_to_json(a.report) == report_to_json(b.report));

  options.seeds.sim = 43;
  const auto c = run(w, bundle, policy, bundle.config_set, options);
  CHECK(outcomes_to_csv(a.outcomes) != outcomes_to_csv(c.outcomes));
}

TEST_CASE("every task runs exactly once, on edge or in the cloud") {
  const auto bundle = make_sim_bundle();
  PolicySpec policy{PolicyKind::MinLatency, 0.0, 2e-7, 0.3};
  auto options = generative_options();
  options.noise = NoiseSpec::uniform(0.2);
  std::vector<double> times;
  for (int i = 0; i < 50; ++i) times.push_back(i * 137.0);
  const auto result = run(arrivals(times), bundle, policy, bundle.config_set, options);
  CHECK(result.outcomes.size() == 50);
  std::size_t cloud = 0;
  for (const auto& o : result.outcomes) {
    if (o.config.is_cloud()) ++cloud;
  }
  CHECK(result.report.edge_execution_count + cloud == 50);
  CHECK(result.report.task_count == 50);
}

TEST_CASE("alpha = 0 spends at most N * Cmax in predicted cost") {
  const auto bundle = make_sim_bundle();
  const double cmax = 1.667e-7;  // exactly one 100 ms quantum at 1 GB
  PolicySpec policy{PolicyKind::MinLatency, 0.0, cmax, 0.0};
  auto options = generative_options();
  options.noise = NoiseSpec::uniform(0.4);
  options.seeds.sim = 5;
  std::vector<double> times;
  for (int i = 0; i < 40; ++i) times.push_back(i * 211.0);
  const auto result = run(arrivals(times), bundle, policy, bundle.config_set, options);
  CHECK(result.report.total_predicted_cost <= 40 * cmax + 1e-18);
}

TEST_CASE("deadline violations are counted from actual latency") {
  const auto bundle = make_sim_bundle();
  // Edge total is 1608 unqueued; deadline 1700 passes the first task and
  // fails the queued second one (2607).
  PolicySpec policy{PolicyKind::MinCost, 1700.0, 0.0, 0.0};
  const auto result =
      run(arrivals({0.0, 1.0}), bundle, policy, {ContainerConfig::edge()}, generative_options());
  CHECK_FALSE(result.outcomes[0].deadline_violated);
  CHECK(result.outcomes[1].deadline_violated);
  CHECK(result.report.pct_deadlines_violated == doctest::Approx(50.0));
  CHECK(result.report.avg_violation_ms == doctest::Approx(2607.0 - 1700.0));
}

TEST_CASE("metrics formulas on a synthetic outcome set") {
  std::vector<SimOutcome> outcomes(2);
  outcomes[0].input_id = "a";
  outcomes[0].config = ContainerConfig::cloud(1024);
  outcomes[0].predicted.total_ms = 900.0;
  outcomes[0].predicted.cost_usd = 2e-7;
  outcomes[0].actual_total_ms = 1000.0;
  outcomes[0].actual_cost_usd = 3e-7;
  outcomes[1].input_id = "b";
  outcomes[1].config = ContainerConfig::edge();
  outcomes[1].predicted.total_ms = 2100.0;
  outcomes[1].predicted.cost_usd = 0.0;
  outcomes[1].actual_total_ms = 2000.0;
  outcomes[1].actual_cost_usd = 0.0;

  PolicySpec policy{PolicyKind::MinLatency, 0.0, 2.5e-7, 0.0};
  const auto m = compute_metrics(outcomes, policy);
  CHECK(m.task_count == 2);
  CHECK(m.total_actual_cost == doctest::Approx(3e-7));
  CHECK(m.total_predicted_cost == doctest::Approx(2e-7));
  // |3e-7 - 2e-7| / 3e-7 * 100
  CHECK(m.cost_prediction_error_pct == doctest::Approx(100.0 / 3.0));
  CHECK(m.avg_actual_latency_ms == doctest::Approx(1500.0));
  CHECK(m.avg_predicted_latency_ms == doctest::Approx(1500.0));
  CHECK(m.latency_prediction_error_pct == doctest::Approx(0.0));
  // 3e-7 spent of 2 * 2.5e-7 budget.
  CHECK(m.pct_budget_used == doctest::Approx(60.0));
  CHECK(m.edge_execution_count == 1);
}

TEST_CASE("trace mode errors name the missing (input, config) row") {
  const auto bundle = make_sim_bundle();
  PolicySpec policy{PolicyKind::MinLatency, 0.0, 1e-3, 0.0};
  std::vector<TraceRow> trace;  // empty: every lookup fails
  SimOptions options;
  options.mode = SimMode::Trace;
  options.trace = &trace;
  try {
    run(arrivals({0.0}), bundle, policy, bundle.config_set, options);
    FAIL("expected SimError");
  } catch (const SimError& e) {
    const std::string what = e.what();
    CHECK(what.find("t0") != std::string::npos);
  }
}

// Independent replay oracle: rebuilds every decision and both container
// state machines from the public primitives, for small zero-noise runs where
// actual components equal predictions. Ground-truth idle lifetime differs
// from the predictor's so warm/cold divergence is exercised.
TEST_CASE("small runs match a first-principles replay") {
  Rng trial_rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    auto bundle = make_sim_bundle();
    bundle.config_set = {ContainerConfig::edge(), ContainerConfig::cloud(1024),
                         ContainerConfig::cloud(2048)};
    bundle.t_idl_ms = 400.0 + trial_rng.uniform() * 600.0;
    bundle.t_idl_dist = {300.0 + trial_rng.uniform() * 600.0, 0.0};

    PolicySpec policy;
    if (trial % 2 == 0) {
      policy = {PolicyKind::MinLatency, 0.0, trial_rng.uniform() * 4e-7, trial_rng.uniform()};
    } else {
      policy = {PolicyKind::MinCost, 500.0 + trial_rng.uniform() * 2500.0, 0.0, 0.0};
    }

    std::vector<double> times;
    double t = 0.0;
    const int n = 1 + static_cast<int>(trial_rng.below(10));
    for (int i = 0; i < n; ++i) {
      times.push_back(t);
      t += trial_rng.uniform() * 900.0;
    }
    const auto workload = arrivals(times);
    const auto result = run(workload, bundle, policy, bundle.config_set, generative_options());
    REQUIRE(result.outcomes.size() == workload.items.size());

    // Replay.
    CIL cil;
    EngineState state;
    std::map<int, std::vector<GroundTruthContainer>> pool;
    double gt_edge_busy = 0.0;
    for (std::size_t i = 0; i < workload.items.size(); ++i) {
      const auto& item = workload.items[i];
      const double now = item.arrival_time_ms;
      while (state.edge_running && state.edge_busy_until_ms <= now) {
        complete_edge(state, state.edge_busy_until_ms);
      }
      const auto preds =
          predict(item, now, bundle, cil, edge_queue_wait(state, now), PricingPolicy{});
      const auto d = decide(preds, state, policy);
      const auto& o = result.outcomes[i];
      CHECK(o.config == d.config);

      if (d.config.is_edge()) {
        enqueue_edge(state, item, d.prediction.breakdown.comp_ms, now);
        const double service_start = std::max(now, gt_edge_busy);
        const double comp = 1000.0;  // zero noise: the model's edge compute
        gt_edge_busy = service_start + comp;
        const double total = (service_start - now) + comp + 25.0 + 583.0;
        CHECK(o.actual_total_ms == doctest::Approx(total));
        CHECK(o.actual_cost_usd == 0.0);
      } else {
        update_cil(cil, d.config, now, d.prediction, bundle.t_idl_ms);
        const double trigger = now;  // upload predicts 0 ms
        auto& recs = pool[d.config.memory_mb];
        std::erase_if(recs,
                      [&](const GroundTruthContainer& r) { return r.death_time_ms < now; });
        int best = -1;
        for (std::size_t k = 0; k < recs.size(); ++k) {
          if (recs[k].busy_until_ms <= trigger && trigger < recs[k].death_time_ms) {
            if (best < 0 || recs[k].last_completion_ms > recs[best].last_completion_ms) {
              best = static_cast<int>(k);
            }
          }
        }
        const bool warm = best >= 0;
        CHECK(o.start_type_actual == (warm ? StartType::Warm : StartType::Cold));
        const double done = trigger + 100.0 + 100.0;  // start + comp
        if (warm) {
          recs[best].busy_until_ms = done;
          recs[best].last_completion_ms = done;
          recs[best].death_time_ms = done + recs[best].t_idl_sample_ms;
        } else {
          recs.push_back({done, done, done + bundle.t_idl_dist.mean_ms,
                          bundle.t_idl_dist.mean_ms});
        }
        CHECK(o.actual_total_ms == doctest::Approx(200.0));  // 0 + 100 + 100 + 0
        CHECK(o.actual_cost_usd ==
              doctest::Approx(cost(100.0, d.config, PricingPolicy{})));
      }
    }
  }
}

TEST_CASE("outcome CSV has a header and one row per outcome") {
  const auto bundle = make_sim_bundle();
  PolicySpec policy{PolicyKind::MinLatency, 0.0, 1e-3, 0.0};
  const auto result =
      run(arrivals({0.0, 300.0}), bundle, policy, bundle.config_set, generative_options());
  const auto csv = outcomes_to_csv(result.outcomes);
  const auto lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == 3);  // header + 2 rows
  CHECK(csv.find("input_id") != std::string::npos);
  CHECK(csv.find("t0") != std::string::npos);
}
