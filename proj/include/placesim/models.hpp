#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "placesim/rng.hpp"
#include "placesim/types.hpp"

namespace placesim {

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// y = intercept + slope * x, slope shrunk by the ridge penalty.
struct LinearModel {
  double intercept = 0.0;
  double slope = 0.0;
  double ridge_penalty = 0.0;

  double predict(double x) const;  // clamped at 0
};

struct ConstantModel {
  double mean_ms = 0.0;
  double stddev_ms = 0.0;  // population stddev
  std::size_t n_samples = 0;

  double predict() const { return mean_ms < 0.0 ? 0.0 : mean_ms; }
};

struct NormalDist {
  double mean_ms = 0.0;
  double stddev_ms = 0.0;

  double sample(Rng& rng) const { return rng.normal(mean_ms, stddev_ms); }
};

struct TreeNode {
  int feature = -1;        // -1 marks a leaf
  double threshold = 0.0;  // go left iff x[feature] <= threshold
  int left = -1;
  int right = -1;
  double leaf_value = 0.0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(double size, double memory_mb) const;
};

struct GbrtHyper {
  int n_trees = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  double subsample_fraction = 1.0;
  int min_leaf = 5;
};

struct GBRTModel {
  double base_prediction = 0.0;
  double learning_rate = 0.1;
  GbrtHyper hyper;
  std::vector<RegressionTree> trees;

  double predict(double size, double memory_mb) const;  // clamped at 0
  // Raw ensemble output without the nonnegativity clamp.
  double raw(double size, double memory_mb) const;
};

// Closed-form simple regression with a penalty on the slope only.
LinearModel fit_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                       double ridge_penalty);

ConstantModel fit_mean(const std::vector<double>& samples);

struct FeatureRow {
  double size = 0.0;
  double memory_mb = 0.0;
};

GBRTModel fit_gbrt(const std::vector<FeatureRow>& features, const std::vector<double>& targets,
                   const GbrtHyper& hyper, std::uint64_t seed);

// Returns the candidate with minimum mean fold MAPE; ties broken by order.
GbrtHyper grid_search_cv(const std::vector<GbrtHyper>& candidates,
                         const std::vector<FeatureRow>& features,
                         const std::vector<double>& targets, int k_folds, std::uint64_t seed);

// Mean absolute percentage error; actual values must be > 0.
double mape(const std::vector<double>& predicted, const std::vector<double>& actual);

struct PerfModelBundle {
  LinearModel upload;
  std::optional<GBRTModel> upload_gbrt;  // used when upload_uses_gbrt
  bool upload_uses_gbrt = false;
  LinearModel edge_compute;
  GBRTModel cloud_compute;
  ConstantModel warm_start;
  ConstantModel cold_start;
  ConstantModel cloud_store;
  ConstantModel edge_store;
  ConstantModel iot_upload;
  double t_idl_ms = 1620000.0;  // container idle lifetime point estimate
  NormalDist t_idl_dist{1620000.0, 0.0};
  NormalDist cold_start_dist{0.0, 0.0};
  std::vector<ContainerConfig> config_set;

  double predict_upload(double size) const;
};

struct TrainOptions {
  double ridge_penalty = 0.0;
  bool upload_gbrt = false;
  GbrtHyper gbrt;
  std::vector<GbrtHyper> gbrt_grid;  // empty: use `gbrt` as-is
  int cv_folds = 3;
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;
  std::optional<double> t_idl_ms;
  double t_idl_stddev_ms = 0.0;
  std::optional<double> cold_start_mean_ms;  // override when the trace has no cold rows
  std::optional<double> cold_start_stddev_ms;  // default: stddev of the cold samples
  std::vector<ContainerConfig> config_set;  // empty: derive from the trace
};

struct TrainReport {
  // Held-out MAPE per component; absent when the holdout had no such rows.
  std::map<std::string, double> component_mape;
};

struct TrainResult {
  PerfModelBundle bundle;
  TrainReport report;
};

TrainResult train_bundle(const std::vector<TraceRow>& trace,
                         const std::map<std::string, double>& sizes, const TrainOptions& options);

inline constexpr const char* kModelFormatVersion = "placesim-model-v1";

std::string bundle_to_json(const PerfModelBundle& bundle);
PerfModelBundle bundle_from_json(const std::string& text);
void save_bundle(const PerfModelBundle& bundle, const std::string& path);
PerfModelBundle load_bundle(const std::string& path);

}  // namespace placesim
