#include "placesim/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace placesim {

namespace {

double clamp0(double x) { return x < 0.0 ? 0.0 : x; }

double feature_value(const FeatureRow& row, int feature) {
  return feature == 0 ? row.size : row.memory_mb;
}

}  // namespace

double LinearModel::predict(double x) const { return clamp0(intercept + slope * x); }

double RegressionTree::predict(double size, double memory_mb) const {
  int i = 0;
  while (nodes[i].feature >= 0) {
    const double x = nodes[i].feature == 0 ? size : memory_mb;
    i = x <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  }
  return nodes[i].leaf_value;
}

double GBRTModel::raw(double size, double memory_mb) const {
  double y = base_prediction;
  for (const auto& tree : trees) y += learning_rate * tree.predict(size, memory_mb);
  return y;
}

double GBRTModel::predict(double size, double memory_mb) const {
  return clamp0(raw(size, memory_mb));
}

double PerfModelBundle::predict_upload(double size) const {
  if (upload_uses_gbrt && upload_gbrt) return upload_gbrt->predict(size, 0.0);
  return upload.predict(size);
}

LinearModel fit_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                       double ridge_penalty) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_linear: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("fit_linear: need at least 2 points");
  if (ridge_penalty < 0.0) throw std::invalid_argument("fit_linear: negative penalty");
  const double n = static_cast<double>(xs.size());
  const double x_mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double y_mean = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
    sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
  }
  if (sxx == 0.0) throw FitError("fit_linear: degenerate xs (all identical)");
  LinearModel model;
  model.ridge_penalty = ridge_penalty;
  model.slope = sxy / (sxx + ridge_penalty);
  model.intercept = y_mean - model.slope * x_mean;
  if (!std::isfinite(model.slope) || !std::isfinite(model.intercept)) {
    throw FitError("fit_linear: non-finite coefficients");
  }
  return model;
}

ConstantModel fit_mean(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("fit_mean: no samples");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / n), samples.size()};
}

namespace {

struct SplitResult {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = -std::numeric_limits<double>::infinity();  // sumL^2/nL + sumR^2/nR
};

// Exhaustive best SSE split over both features; candidate thresholds are
// midpoints between distinct consecutive sorted values.
SplitResult best_split(const std::vector<FeatureRow>& features, const std::vector<double>& residuals,
                       std::vector<int>& indices, int min_leaf) {
  SplitResult best;
  const std::size_t n = indices.size();
  for (int feature = 0; feature < 2; ++feature) {
    std::sort(indices.begin(), indices.end(), [&](int a, int b) {
      return feature_value(features[a], feature) < feature_value(features[b], feature);
    });
    double sum_left = 0.0;
    double sum_total = 0.0;
    for (int i : indices) sum_total += residuals[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      sum_left += residuals[indices[i]];
      const double v = feature_value(features[indices[i]], feature);
      const double v_next = feature_value(features[indices[i + 1]], feature);
      if (v == v_next) continue;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = n - n_left;
      if (n_left < static_cast<std::size_t>(min_leaf) ||
          n_right < static_cast<std::size_t>(min_leaf)) {
        continue;
      }
      const double sum_right = sum_total - sum_left;
      const double score = sum_left * sum_left / n_left + sum_right * sum_right / n_right;
      if (score > best.score) {
        best = {true, feature, 0.5 * (v + v_next), score};
      }
    }
  }
  return best;
}

int build_tree(RegressionTree& tree, const std::vector<FeatureRow>& features,
               const std::vector<double>& residuals, std::vector<int> indices, int depth,
               const GbrtHyper& hyper) {
  double sum = 0.0;
  for (int i : indices) sum += residuals[i];
  const double mean = sum / static_cast<double>(indices.size());

  const int node_index = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, mean});
  if (depth >= hyper.max_depth ||
      indices.size() < 2 * static_cast<std::size_t>(hyper.min_leaf)) {
    return node_index;
  }
  const SplitResult split = best_split(features, residuals, indices, hyper.min_leaf);
  if (!split.found) return node_index;

  std::vector<int> left_idx;
  std::vector<int> right_idx;
  for (int i : indices) {
    (feature_value(features[i], split.feature) <= split.threshold ? left_idx : right_idx)
        .push_back(i);
  }
  tree.nodes[node_index].feature = split.feature;
  tree.nodes[node_index].threshold = split.threshold;
  const int left = build_tree(tree, features, residuals, std::move(left_idx), depth + 1, hyper);
  tree.nodes[node_index].left = left;
  const int right = build_tree(tree, features, residuals, std::move(right_idx), depth + 1, hyper);
  tree.nodes[node_index].right = right;
  return node_index;
}

}  // namespace

GBRTModel fit_gbrt(const std::vector<FeatureRow>& features, const std::vector<double>& targets,
                   const GbrtHyper& hyper, std::uint64_t seed) {
  if (features.size() != targets.size()) throw std::invalid_argument("fit_gbrt: length mismatch");
  if (features.empty()) throw std::invalid_argument("fit_gbrt: no training data");
  if (features.size() < 2 * static_cast<std::size_t>(hyper.min_leaf)) {
    throw std::invalid_argument("fit_gbrt: fewer than 2*min_leaf samples");
  }
  if (hyper.n_trees < 0 || hyper.learning_rate <= 0.0 || hyper.learning_rate > 1.0 ||
      hyper.subsample_fraction <= 0.0 || hyper.subsample_fraction > 1.0 || hyper.min_leaf < 1) {
    throw std::invalid_argument("fit_gbrt: bad hyperparameters");
  }
  for (double t : targets) {
    if (!std::isfinite(t)) throw std::invalid_argument("fit_gbrt: non-finite target");
  }

  GBRTModel model;
  model.hyper = hyper;
  model.learning_rate = hyper.learning_rate;
  model.base_prediction =
      std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(targets.size());

  const std::size_t n = features.size();
  std::vector<double> current(n, model.base_prediction);
  std::vector<int> all_indices(n);
  std::iota(all_indices.begin(), all_indices.end(), 0);
  Rng rng(seed);

  const std::size_t subsample =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(
                                   hyper.subsample_fraction * static_cast<double>(n))));

  std::vector<double> residuals(n);
  for (int stage = 0; stage < hyper.n_trees; ++stage) {
    for (std::size_t i = 0; i < n; ++i) residuals[i] = targets[i] - current[i];

    std::vector<int> sample = all_indices;
    if (subsample < n) {
      // Partial Fisher-Yates; the first `subsample` entries form the draw.
      for (std::size_t i = 0; i < subsample; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(sample[i], sample[j]);
      }
      sample.resize(subsample);
      std::sort(sample.begin(), sample.end());
    }

    RegressionTree tree;
    build_tree(tree, features, residuals, std::move(sample), 0, hyper);
    for (std::size_t i = 0; i < n; ++i) {
      current[i] += hyper.learning_rate * tree.predict(features[i].size, features[i].memory_mb);
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double mape(const std::vector<double>& predicted, const std::vector<double>& actual) {
  if (predicted.size() != actual.size()) throw std::invalid_argument("mape: length mismatch");
  if (predicted.empty()) throw std::invalid_argument("mape: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (!(actual[i] > 0.0)) throw std::invalid_argument("mape: actual values must be > 0");
    sum += std::abs(predicted[i] - actual[i]) / actual[i];
  }
  return sum / static_cast<double>(predicted.size()) * 100.0;
}

GbrtHyper grid_search_cv(const std::vector<GbrtHyper>& candidates,
                         const std::vector<FeatureRow>& features,
                         const std::vector<double>& targets, int k_folds, std::uint64_t seed) {
  if (candidates.empty()) throw std::invalid_argument("grid_search_cv: no candidates");
  if (k_folds < 2) throw std::invalid_argument("grid_search_cv: k_folds must be >= 2");
  if (features.size() < static_cast<std::size_t>(k_folds)) {
    throw std::invalid_argument("grid_search_cv: fewer samples than folds");
  }

  // Seeded shuffle, then fold j takes every k-th element.
  std::vector<int> order(features.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }

  double best_score = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double fold_sum = 0.0;
    int fold_count = 0;
    for (int fold = 0; fold < k_folds; ++fold) {
      std::vector<FeatureRow> train_x;
      std::vector<double> train_y;
      std::vector<double> valid_pred;
      std::vector<double> valid_actual;
      std::vector<int> valid_idx;
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (static_cast<int>(i % k_folds) == fold) {
          valid_idx.push_back(order[i]);
        } else {
          train_x.push_back(features[order[i]]);
          train_y.push_back(targets[order[i]]);
        }
      }
      const GBRTModel model = fit_gbrt(train_x, train_y, candidates[c], seed + fold);
      for (int i : valid_idx) {
        if (!(targets[i] > 0.0)) continue;
        valid_pred.push_back(model.predict(features[i].size, features[i].memory_mb));
        valid_actual.push_back(targets[i]);
      }
      if (valid_pred.empty()) continue;
      fold_sum += mape(valid_pred, valid_actual);
      ++fold_count;
    }
    if (fold_count == 0) continue;
    const double score = fold_sum / fold_count;
    if (score < best_score) {
      best_score = score;
      best_index = c;
    }
  }
  return candidates[best_index];
}

namespace {

struct TraceSplit {
  std::vector<const TraceRow*> train;
  std::vector<const TraceRow*> holdout;
};

TraceSplit split_rows(const std::vector<const TraceRow*>& rows, double holdout_fraction,
                      Rng& rng) {
  std::vector<const TraceRow*> shuffled = rows;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
  }
  const std::size_t n_holdout =
      static_cast<std::size_t>(std::floor(holdout_fraction * static_cast<double>(rows.size())));
  TraceSplit split;
  split.holdout.assign(shuffled.begin(), shuffled.begin() + n_holdout);
  split.train.assign(shuffled.begin() + n_holdout, shuffled.end());
  if (split.train.empty()) {
    split.train = rows;
    split.holdout.clear();
  }
  return split;
}

double lookup_size(const std::map<std::string, double>& sizes, const std::string& input_id) {
  const auto it = sizes.find(input_id);
  if (it == sizes.end()) throw FitError("train_bundle: no size for input '" + input_id + "'");
  return it->second;
}

}  // namespace

TrainResult train_bundle(const std::vector<TraceRow>& trace,
                         const std::map<std::string, double>& sizes, const TrainOptions& options) {
  std::vector<const TraceRow*> cloud_rows;
  std::vector<const TraceRow*> edge_rows;
  for (const auto& row : trace) {
    (row.config.is_cloud() ? cloud_rows : edge_rows).push_back(&row);
  }
  if (cloud_rows.empty()) throw FitError("train_bundle: trace has no cloud rows");
  if (edge_rows.empty()) throw FitError("train_bundle: trace has no edge rows");

  // Config set: explicit from options, else every cloud config seen.
  std::vector<ContainerConfig> config_set = options.config_set;
  if (config_set.empty()) {
    config_set.push_back(ContainerConfig::edge());
    std::vector<int> mems;
    for (const auto* row : cloud_rows) mems.push_back(row->config.memory_mb);
    std::sort(mems.begin(), mems.end());
    mems.erase(std::unique(mems.begin(), mems.end()), mems.end());
    for (int mb : mems) config_set.push_back(ContainerConfig::cloud(mb));
  } else {
    for (const auto& config : config_set) {
      if (config.is_edge()) continue;
      const bool covered = std::any_of(cloud_rows.begin(), cloud_rows.end(),
                                       [&](const TraceRow* r) { return r->config == config; });
      if (!covered) {
        throw FitError("train_bundle: no trace rows for config " + to_string(config));
      }
    }
  }

  Rng rng(options.seed);
  const TraceSplit cloud = split_rows(cloud_rows, options.holdout_fraction, rng);
  const TraceSplit edge = split_rows(edge_rows, options.holdout_fraction, rng);

  PerfModelBundle bundle;
  bundle.config_set = config_set;

  // Upload model over cloud rows.
  {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<FeatureRow> fx;
    for (const auto* row : cloud.train) {
      xs.push_back(lookup_size(sizes, row->input_id));
      ys.push_back(*row->upld_ms);
      fx.push_back({xs.back(), 0.0});
    }
    bundle.upload = fit_linear(xs, ys, options.ridge_penalty);
    bundle.upload_uses_gbrt = options.upload_gbrt;
    if (options.upload_gbrt) {
      bundle.upload_gbrt = fit_gbrt(fx, ys, options.gbrt, options.seed + 1);
    }
  }

  // Cloud compute GBRT over (size, memory).
  {
    std::vector<FeatureRow> fx;
    std::vector<double> ys;
    for (const auto* row : cloud.train) {
      fx.push_back({lookup_size(sizes, row->input_id), static_cast<double>(row->config.memory_mb)});
      ys.push_back(row->comp_ms);
    }
    GbrtHyper hyper = options.gbrt;
    if (!options.gbrt_grid.empty()) {
      hyper = grid_search_cv(options.gbrt_grid, fx, ys, options.cv_folds, options.seed + 2);
    }
    bundle.cloud_compute = fit_gbrt(fx, ys, hyper, options.seed + 3);
  }

  // Startup and store means.
  {
    std::vector<double> warm;
    std::vector<double> cold;
    std::vector<double> store;
    for (const auto* row : cloud.train) {
      (row->start_type == StartType::Warm ? warm : cold).push_back(row->start_ms);
      store.push_back(row->store_ms);
    }
    if (warm.empty()) throw FitError("train_bundle: no warm-start cloud rows");
    bundle.warm_start = fit_mean(warm);
    bundle.cloud_store = fit_mean(store);
    if (!cold.empty()) {
      bundle.cold_start = fit_mean(cold);
    } else if (options.cold_start_mean_ms) {
      bundle.cold_start = {*options.cold_start_mean_ms,
                           options.cold_start_stddev_ms.value_or(0.0), 0};
    } else {
      throw FitError("train_bundle: no cold-start rows and no cold_start_mean_ms option");
    }
    bundle.cold_start_dist = {bundle.cold_start.mean_ms,
                              options.cold_start_stddev_ms.value_or(bundle.cold_start.stddev_ms)};
  }

  // Edge models.
  {
    std::vector<double> xs;
    std::vector<double> comp;
    std::vector<double> store;
    std::vector<double> iotup;
    for (const auto* row : edge.train) {
      xs.push_back(lookup_size(sizes, row->input_id));
      comp.push_back(row->comp_ms);
      store.push_back(row->store_ms);
      if (row->iotup_ms) iotup.push_back(*row->iotup_ms);
    }
    bundle.edge_compute = fit_linear(xs, comp, options.ridge_penalty);
    bundle.edge_store = fit_mean(store);
    bundle.iot_upload = iotup.empty() ? ConstantModel{0.0, 0.0, 0} : fit_mean(iotup);
  }

  bundle.t_idl_ms = options.t_idl_ms.value_or(1620000.0);
  if (!(bundle.t_idl_ms > 0.0)) throw FitError("train_bundle: t_idl_ms must be positive");
  bundle.t_idl_dist = {bundle.t_idl_ms, options.t_idl_stddev_ms};

  // Held-out MAPE per component, on the training rows when no holdout exists.
  TrainReport report;
  const auto& cloud_eval = cloud.holdout.empty() ? cloud.train : cloud.holdout;
  const auto& edge_eval = edge.holdout.empty() ? edge.train : edge.holdout;
  auto add_mape = [&report](const std::string& key, const std::vector<double>& pred,
                            const std::vector<double>& actual) {
    if (pred.empty()) return;
    if (std::any_of(actual.begin(), actual.end(), [](double a) { return !(a > 0.0); })) return;
    report.component_mape[key] = mape(pred, actual);
  };
  {
    std::vector<double> p_upld, a_upld, p_comp, a_comp, p_store, a_store, p_start, a_start;
    std::vector<double> p_total, a_total;
    for (const auto* row : cloud_eval) {
      const double size = lookup_size(sizes, row->input_id);
      const double upld = bundle.predict_upload(size);
      const double comp =
          bundle.cloud_compute.predict(size, static_cast<double>(row->config.memory_mb));
      const double start = row->start_type == StartType::Warm ? bundle.warm_start.predict()
                                                              : bundle.cold_start.predict();
      const double store = bundle.cloud_store.predict();
      p_upld.push_back(upld);
      a_upld.push_back(*row->upld_ms);
      p_comp.push_back(comp);
      a_comp.push_back(row->comp_ms);
      p_store.push_back(store);
      a_store.push_back(row->store_ms);
      p_start.push_back(start);
      a_start.push_back(row->start_ms);
      p_total.push_back(upld + start + comp + store);
      a_total.push_back(*row->upld_ms + row->start_ms + row->comp_ms + row->store_ms);
    }
    add_mape("upload", p_upld, a_upld);
    add_mape("cloud_compute", p_comp, a_comp);
    add_mape("cloud_store", p_store, a_store);
    add_mape("start", p_start, a_start);
    add_mape("cloud_total", p_total, a_total);
  }
  {
    std::vector<double> p_comp, a_comp, p_store, a_store, p_iotup, a_iotup;
    std::vector<double> p_total, a_total;
    for (const auto* row : edge_eval) {
      const double size = lookup_size(sizes, row->input_id);
      const double comp = bundle.edge_compute.predict(size);
      const double store = bundle.edge_store.predict();
      const double iotup_actual = row->iotup_ms.value_or(0.0);
      const double iotup = row->iotup_ms ? bundle.iot_upload.predict() : 0.0;
      p_comp.push_back(comp);
      a_comp.push_back(row->comp_ms);
      p_store.push_back(store);
      a_store.push_back(row->store_ms);
      if (row->iotup_ms) {
        p_iotup.push_back(iotup);
        a_iotup.push_back(iotup_actual);
      }
      p_total.push_back(comp + iotup + store);
      a_total.push_back(row->comp_ms + iotup_actual + row->store_ms);
    }
    add_mape("edge_compute", p_comp, a_comp);
    add_mape("edge_store", p_store, a_store);
    add_mape("iot_upload", p_iotup, a_iotup);
    add_mape("edge_total", p_total, a_total);
  }

  return {std::move(bundle), std::move(report)};
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json tree_node_to_json(const RegressionTree& tree, int index) {
  const TreeNode& node = tree.nodes[index];
  if (node.feature < 0) return json{{"leaf_value", node.leaf_value}};
  return json{{"feature", node.feature},
              {"threshold", node.threshold},
              {"left", tree_node_to_json(tree, node.left)},
              {"right", tree_node_to_json(tree, node.right)}};
}

int tree_node_from_json(const json& j, RegressionTree& tree) {
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (j.contains("leaf_value")) {
    tree.nodes[index].leaf_value = j.at("leaf_value").get<double>();
    return index;
  }
  tree.nodes[index].feature = j.at("feature").get<int>();
  tree.nodes[index].threshold = j.at("threshold").get<double>();
  const int left = tree_node_from_json(j.at("left"), tree);
  tree.nodes[index].left = left;
  const int right = tree_node_from_json(j.at("right"), tree);
  tree.nodes[index].right = right;
  return index;
}

json linear_to_json(const LinearModel& m) {
  return json{{"intercept", m.intercept}, {"slope", m.slope}, {"ridge_penalty", m.ridge_penalty}};
}

LinearModel linear_from_json(const json& j) {
  return {j.at("intercept").get<double>(), j.at("slope").get<double>(),
          j.at("ridge_penalty").get<double>()};
}

json constant_to_json(const ConstantModel& m) {
  return json{{"mean_ms", m.mean_ms}, {"stddev_ms", m.stddev_ms}, {"n_samples", m.n_samples}};
}

ConstantModel constant_from_json(const json& j) {
  return {j.at("mean_ms").get<double>(), j.at("stddev_ms").get<double>(),
          j.at("n_samples").get<std::size_t>()};
}

json normal_to_json(const NormalDist& d) {
  return json{{"mean_ms", d.mean_ms}, {"stddev_ms", d.stddev_ms}};
}

NormalDist normal_from_json(const json& j) {
  return {j.at("mean_ms").get<double>(), j.at("stddev_ms").get<double>()};
}

json gbrt_to_json(const GBRTModel& m) {
  json trees = json::array();
  for (const auto& tree : m.trees) trees.push_back(tree_node_to_json(tree, 0));
  return json{{"base_prediction", m.base_prediction},
              {"learning_rate", m.learning_rate},
              {"hyper",
               {{"n_trees", m.hyper.n_trees},
                {"max_depth", m.hyper.max_depth},
                {"learning_rate", m.hyper.learning_rate},
                {"subsample_fraction", m.hyper.subsample_fraction},
                {"min_leaf", m.hyper.min_leaf}}},
              {"trees", trees}};
}

GBRTModel gbrt_from_json(const json& j) {
  GBRTModel m;
  m.base_prediction = j.at("base_prediction").get<double>();
  m.learning_rate = j.at("learning_rate").get<double>();
  const auto& h = j.at("hyper");
  m.hyper = {h.at("n_trees").get<int>(), h.at("max_depth").get<int>(),
             h.at("learning_rate").get<double>(), h.at("subsample_fraction").get<double>(),
             h.at("min_leaf").get<int>()};
  for (const auto& tj : j.at("trees")) {
    RegressionTree tree;
    tree_node_from_json(tj, tree);
    m.trees.push_back(std::move(tree));
  }
  return m;
}

}  // namespace

std::string bundle_to_json(const PerfModelBundle& bundle) {
  json configs = json::array();
  for (const auto& config : bundle.config_set) configs.push_back(to_string(config));
  json j{{"version", kModelFormatVersion},
         {"upload", linear_to_json(bundle.upload)},
         {"upload_uses_gbrt", bundle.upload_uses_gbrt},
         {"edge_compute", linear_to_json(bundle.edge_compute)},
         {"cloud_compute", gbrt_to_json(bundle.cloud_compute)},
         {"warm_start", constant_to_json(bundle.warm_start)},
         {"cold_start", constant_to_json(bundle.cold_start)},
         {"cloud_store", constant_to_json(bundle.cloud_store)},
         {"edge_store", constant_to_json(bundle.edge_store)},
         {"iot_upload", constant_to_json(bundle.iot_upload)},
         {"t_idl_ms", bundle.t_idl_ms},
         {"t_idl_dist", normal_to_json(bundle.t_idl_dist)},
         {"cold_start_dist", normal_to_json(bundle.cold_start_dist)},
         {"config_set", configs}};
  if (bundle.upload_gbrt) j["upload_gbrt"] = gbrt_to_json(*bundle.upload_gbrt);
  return j.dump(2);
}

PerfModelBundle bundle_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("version").get<std::string>() != kModelFormatVersion) {
    throw std::runtime_error("unsupported model file version: " +
                             j.at("version").get<std::string>());
  }
  PerfModelBundle bundle;
  bundle.upload = linear_from_json(j.at("upload"));
  bundle.upload_uses_gbrt = j.at("upload_uses_gbrt").get<bool>();
  if (j.contains("upload_gbrt")) bundle.upload_gbrt = gbrt_from_json(j.at("upload_gbrt"));
  bundle.edge_compute = linear_from_json(j.at("edge_compute"));
  bundle.cloud_compute = gbrt_from_json(j.at("cloud_compute"));
  bundle.warm_start = constant_from_json(j.at("warm_start"));
  bundle.cold_start = constant_from_json(j.at("cold_start"));
  bundle.cloud_store = constant_from_json(j.at("cloud_store"));
  bundle.edge_store = constant_from_json(j.at("edge_store"));
  bundle.iot_upload = constant_from_json(j.at("iot_upload"));
  bundle.t_idl_ms = j.at("t_idl_ms").get<double>();
  bundle.t_idl_dist = normal_from_json(j.at("t_idl_dist"));
  bundle.cold_start_dist = normal_from_json(j.at("cold_start_dist"));
  for (const auto& c : j.at("config_set")) {
    bundle.config_set.push_back(parse_config(c.get<std::string>()));
  }
  return bundle;
}

void save_bundle(const PerfModelBundle& bundle, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << bundle_to_json(bundle) << "\n";
}

PerfModelBundle load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return bundle_from_json(ss.str());
}

}  // namespace placesim
