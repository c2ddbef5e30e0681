#include "placesim/predictor.hpp"

#include <algorithm>

namespace placesim {

int CIL::pick_idle(const std::vector<ContainerRecord>& records, double t_ms) {
  int best = -1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].idle_at(t_ms)) continue;
    if (best < 0 || records[i].last_completion_ms > records[best].last_completion_ms) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<Prediction> predict(const InputItem& input, double now_ms,
                                const PerfModelBundle& bundle, const CIL& cil,
                                double edge_queue_wait_ms, const PricingPolicy& pricing) {
  if (bundle.config_set.empty()) {
    throw std::runtime_error("predict: bundle has an empty config set");
  }
  std::vector<Prediction> predictions;
  predictions.reserve(bundle.config_set.size());
  for (const auto& config : bundle.config_set) {
    Prediction p;
    p.config = config;
    if (config.is_edge()) {
      p.start_type = PredictedStart::EdgeNA;
      p.breakdown.comp_ms = bundle.edge_compute.predict(input.size);
      p.breakdown.iotup_ms = bundle.iot_upload.predict();
      p.breakdown.store_ms = bundle.edge_store.predict();
      p.breakdown.queue_wait_ms = edge_queue_wait_ms;
      p.cost_usd = 0.0;
    } else {
      p.breakdown.upld_ms = bundle.predict_upload(input.size);
      const double trigger_ms = now_ms + p.breakdown.upld_ms;
      const auto it = cil.per_config.find(config.memory_mb);
      const bool warm =
          it != cil.per_config.end() && CIL::pick_idle(it->second, trigger_ms) >= 0;
      p.start_type = warm ? PredictedStart::Warm : PredictedStart::Cold;
      p.breakdown.start_ms =
          warm ? bundle.warm_start.predict() : bundle.cold_start.predict();
      p.breakdown.comp_ms =
          bundle.cloud_compute.predict(input.size, static_cast<double>(config.memory_mb));
      p.breakdown.store_ms = bundle.cloud_store.predict();
      p.cost_usd = cost(p.breakdown.comp_ms, config, pricing);
    }
    p.total_ms = p.breakdown.total();
    predictions.push_back(p);
  }
  return predictions;
}

void update_cil(CIL& cil, const ContainerConfig& config, double now_ms,
                const Prediction& prediction, double t_idl_ms) {
  if (!config.is_cloud()) {
    throw std::invalid_argument("update_cil: edge executions do not touch the CIL");
  }
  if (prediction.config != config) {
    throw std::invalid_argument("update_cil: prediction does not match config");
  }
  auto& records = cil.per_config[config.memory_mb];
  const double trigger_ms = now_ms + prediction.breakdown.upld_ms;
  const double completion_ms =
      trigger_ms + prediction.breakdown.start_ms + prediction.breakdown.comp_ms;

  if (prediction.start_type == PredictedStart::Warm) {
    const int idx = CIL::pick_idle(records, trigger_ms);
    if (idx < 0) {
      throw std::logic_error("update_cil: warm prediction but no idle container");
    }
    records[idx].busy_until_ms = completion_ms;
    records[idx].last_completion_ms = completion_ms;
    records[idx].death_time_ms = completion_ms + t_idl_ms;
  } else {
    records.push_back({completion_ms, completion_ms, completion_ms + t_idl_ms});
  }

  // Maintenance pass: drop every record already past its death time.
  for (auto& [mem, recs] : cil.per_config) {
    std::erase_if(recs, [now_ms](const ContainerRecord& r) { return r.dead_at(now_ms); });
    std::sort(recs.begin(), recs.end(), [](const ContainerRecord& a, const ContainerRecord& b) {
      return a.last_completion_ms < b.last_completion_ms;
    });
  }
}

}  // namespace placesim
