/*
 * Copyright 2026 The featrecon Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "featrecon/learner.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "featrecon/error.h"
#include "featrecon/stats.h"

namespace featrecon {
namespace {

constexpr double kMinGain = 1e-12;

void check_schema(const ScoringModel& model, const DesignMatrix& rows) {
  if (!model.is_fitted()) fail(ErrorCode::kModelNotTrained, "model is not fitted");
  if (rows.n_cols != model.n_inputs()) {
    fail(ErrorCode::kSchemaMismatch,
         "model expects " + std::to_string(model.n_inputs()) + " columns, got " +
             std::to_string(rows.n_cols));
  }
}

void check_fit_input(const DesignMatrix& x, std::span<const double> y) {
  if (x.n_rows == 0) fail(ErrorCode::kEmptyTable, "cannot fit on zero rows");
  if (y.size() != x.n_rows) {
    fail(ErrorCode::kLengthMismatch, "target length differs from row count");
  }
}

void check_classes(std::span<const double> y, Task task) {
  if (task != Task::kClassification) return;
  const double first = y.front();
  for (const double v : y) {
    if (v != first) return;
  }
  fail(ErrorCode::kSingleClassTarget, "training target has a single class");
}

// Majority vote; ties resolve to the lowest class.
int argmax_count(const std::vector<double>& counts) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(counts.size()); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

double gini_weighted(const std::vector<double>& counts, double total) {
  if (total <= 0) return 0.0;
  double sum_sq = 0.0;
  for (const double c : counts) sum_sq += c * c;
  return total - sum_sq / total;
}

double sse(double sum, double sum_sq, double count) {
  if (count <= 0) return 0.0;
  return std::max(0.0, sum_sq - sum * sum / count);
}

}  // namespace

// ---------------------------------------------------------------------------
// DesignMatrix

DesignMatrix DesignMatrix::take_rows(std::span<const std::size_t> rows) const {
  DesignMatrix out;
  out.n_rows = rows.size();
  out.n_cols = n_cols;
  out.kinds = kinds;
  out.n_categories = n_categories;
  out.values.resize(out.n_rows * n_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(rows[r] * n_cols),
                n_cols, out.values.begin() + static_cast<std::ptrdiff_t>(r * n_cols));
  }
  return out;
}

DesignMatrix design_matrix(const FeatureTable& table) {
  DesignMatrix m;
  m.n_rows = table.n_rows();
  m.n_cols = table.n_cols();
  m.values.resize(m.n_rows * m.n_cols);
  for (std::size_t c = 0; c < m.n_cols; ++c) {
    const auto& column = table.column(c);
    m.kinds.push_back(column.kind());
    m.n_categories.push_back(column.n_categories());
    for (std::size_t r = 0; r < m.n_rows; ++r) m.at(r, c) = column.values()[r];
  }
  return m;
}

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kRandomForest: return "rf";
    case ModelKind::kKnn: return "knn";
    case ModelKind::kRidge: return "ridge";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "rf" || text == "random_forest") return ModelKind::kRandomForest;
  if (text == "knn") return ModelKind::kKnn;
  if (text == "ridge") return ModelKind::kRidge;
  fail(ErrorCode::kInvalidConfig, "unknown model '" + std::string(text) + "'");
}

void Predictor::fit(const FeatureTable& table) {
  fit(design_matrix(table), table.target().values(), table.target().task(),
      table.target().n_classes());
}

std::unique_ptr<Predictor> make_predictor(const ModelSpec& spec,
                                          std::uint64_t seed) {
  switch (spec.kind) {
    case ModelKind::kRandomForest:
      return std::make_unique<RandomForest>(spec.forest, seed);
    case ModelKind::kKnn:
      return std::make_unique<KnnModel>(spec.knn_k);
    case ModelKind::kRidge:
      return std::make_unique<RidgeModel>(spec.ridge_lambda);
  }
  fail(ErrorCode::kInvalidConfig, "unknown model kind");
}

// ---------------------------------------------------------------------------
// Decision tree

double weighted_impurity(std::span<const double> y, Task task, int n_classes) {
  if (task == Task::kClassification) {
    std::vector<double> counts(static_cast<std::size_t>(n_classes), 0.0);
    for (const double v : y) counts[static_cast<std::size_t>(v)] += 1.0;
    return gini_weighted(counts, static_cast<double>(y.size()));
  }
  double sum = 0.0, sum_sq = 0.0;
  for (const double v : y) {
    sum += v;
    sum_sq += v * v;
  }
  return sse(sum, sum_sq, static_cast<double>(y.size()));
}

void DecisionTree::fit(const DesignMatrix& x, std::span<const double> y,
                       std::span<const std::size_t> rows, Task task,
                       int n_classes, const TreeParams& params,
                       std::uint64_t seed, std::vector<double>* importance) {
  nodes_.clear();
  task_ = task;
  n_classes_ = n_classes;
  params_ = params;
  importance_ = importance;
  rng_.seed(seed);
  std::vector<std::size_t> work(rows.begin(), rows.end());
  if (work.empty()) fail(ErrorCode::kEmptyTable, "tree needs at least one row");
  build(x, y, work, 0, work.size(), 0);
  importance_ = nullptr;
}

int DecisionTree::build(const DesignMatrix& x, std::span<const double> y,
                        std::vector<std::size_t>& rows, std::size_t begin,
                        std::size_t end, int depth) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  const std::size_t count = end - begin;
  const bool classify = task_ == Task::kClassification;

  std::vector<double> class_counts;
  double sum = 0.0, sum_sq = 0.0;
  if (classify) {
    class_counts.assign(static_cast<std::size_t>(n_classes_), 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      class_counts[static_cast<std::size_t>(y[rows[i]])] += 1.0;
    }
  } else {
    for (std::size_t i = begin; i < end; ++i) {
      sum += y[rows[i]];
      sum_sq += y[rows[i]] * y[rows[i]];
    }
  }
  const double parent = classify ? gini_weighted(class_counts, count)
                                 : sse(sum, sum_sq, count);
  {
    TreeNode& node = nodes_[index];
    node.n_samples = count;
    node.prediction = classify ? argmax_count(class_counts)
                               : sum / static_cast<double>(count);
  }
  const auto min_leaf = static_cast<std::size_t>(std::max(params_.min_leaf, 1));
  if (depth >= params_.max_depth || count < 2 * min_leaf || parent <= kMinGain) {
    return index;
  }

  // Candidate features for this split, ascending for deterministic ties.
  const int d = static_cast<int>(x.n_cols);
  std::vector<int> features(static_cast<std::size_t>(d));
  std::iota(features.begin(), features.end(), 0);
  int k = params_.features_per_split;
  if (k > 0 && k < d) {
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<int> pick(i, d - 1);
      std::swap(features[i], features[pick(rng_)]);
    }
    features.resize(static_cast<std::size_t>(k));
    std::sort(features.begin(), features.end());
  }

  double best_gain = kMinGain;
  int best_feature = -1;
  bool best_categorical = false;
  double best_threshold = 0.0;

  std::vector<std::pair<double, double>> sorted(count);  // (x, y)
  std::vector<double> right_counts(class_counts.size());
  for (const int f : features) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t r = rows[begin + i];
      sorted[i] = {x.at(r, static_cast<std::size_t>(f)), y[r]};
    }
    std::sort(sorted.begin(), sorted.end());
    if (x.kinds[static_cast<std::size_t>(f)] == FeatureKind::kNumerical) {
      std::vector<double> left_counts(class_counts.size(), 0.0);
      double left_sum = 0.0, left_sq = 0.0;
      for (std::size_t i = 0; i + 1 < count; ++i) {
        const double yv = sorted[i].second;
        if (classify) {
          left_counts[static_cast<std::size_t>(yv)] += 1.0;
        } else {
          left_sum += yv;
          left_sq += yv * yv;
        }
        const std::size_t n_left = i + 1;
        const std::size_t n_right = count - n_left;
        if (sorted[i].first == sorted[i + 1].first) continue;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        double gain;
        if (classify) {
          for (std::size_t c = 0; c < class_counts.size(); ++c) {
            right_counts[c] = class_counts[c] - left_counts[c];
          }
          gain = parent - gini_weighted(left_counts, n_left) -
                 gini_weighted(right_counts, n_right);
        } else {
          gain = parent - sse(left_sum, left_sq, n_left) -
                 sse(sum - left_sum, sum_sq - left_sq, n_right);
        }
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_categorical = false;
          double threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
          if (!(threshold < sorted[i + 1].first)) threshold = sorted[i].first;
          best_threshold = threshold;
        }
      }
    } else {
      // One-vs-rest equality splits over the categories present, ascending.
      std::vector<double> left_counts(class_counts.size(), 0.0);
      std::size_t i = 0;
      while (i < count) {
        const double category = sorted[i].first;
        std::fill(left_counts.begin(), left_counts.end(), 0.0);
        double left_sum = 0.0, left_sq = 0.0;
        std::size_t n_left = 0;
        while (i < count && sorted[i].first == category) {
          const double yv = sorted[i].second;
          if (classify) {
            left_counts[static_cast<std::size_t>(yv)] += 1.0;
          } else {
            left_sum += yv;
            left_sq += yv * yv;
          }
          ++n_left;
          ++i;
        }
        const std::size_t n_right = count - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        double gain;
        if (classify) {
          for (std::size_t c = 0; c < class_counts.size(); ++c) {
            right_counts[c] = class_counts[c] - left_counts[c];
          }
          gain = parent - gini_weighted(left_counts, n_left) -
                 gini_weighted(right_counts, n_right);
        } else {
          gain = parent - sse(left_sum, left_sq, n_left) -
                 sse(sum - left_sum, sum_sq - left_sq, n_right);
        }
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_categorical = true;
          best_threshold = category;
        }
      }
    }
  }
  if (best_feature < 0) return index;

  const auto goes_left = [&](std::size_t r) {
    const double v = x.at(r, static_cast<std::size_t>(best_feature));
    return best_categorical ? v == best_threshold : v <= best_threshold;
  };
  const auto middle = std::stable_partition(
      rows.begin() + static_cast<std::ptrdiff_t>(begin),
      rows.begin() + static_cast<std::ptrdiff_t>(end), goes_left);
  const auto split = static_cast<std::size_t>(middle - rows.begin());
  if (importance_ != nullptr) {
    (*importance_)[static_cast<std::size_t>(best_feature)] += best_gain;
  }
  const int left = build(x, y, rows, begin, split, depth + 1);
  const int right = build(x, y, rows, split, end, depth + 1);
  TreeNode& node = nodes_[index];
  node.is_leaf = false;
  node.feature = best_feature;
  node.categorical_split = best_categorical;
  node.threshold = best_threshold;
  node.left = left;
  node.right = right;
  return index;
}

double DecisionTree::predict_row(std::span<const double> row) const {
  int i = 0;
  while (!nodes_[i].is_leaf) {
    const TreeNode& node = nodes_[i];
    const double v = row[static_cast<std::size_t>(node.feature)];
    const bool left = node.categorical_split ? v == node.threshold
                                             : v <= node.threshold;
    i = left ? node.left : node.right;
  }
  return nodes_[i].prediction;
}

// ---------------------------------------------------------------------------
// Random forest

void RandomForest::fit(const DesignMatrix& x, std::span<const double> y,
                       Task task, int n_classes) {
  check_fit_input(x, y);
  check_classes(y, task);
  task_ = task;
  n_classes_ = task == Task::kClassification ? n_classes : 0;
  n_inputs_ = x.n_cols;
  trees_.assign(static_cast<std::size_t>(std::max(params_.n_trees, 1)), {});
  importance_.assign(x.n_cols, 0.0);

  const int d = static_cast<int>(x.n_cols);
  TreeParams tree_params;
  tree_params.max_depth = params_.max_depth;
  tree_params.min_leaf = params_.min_leaf;
  if (params_.feature_fraction > 0) {
    tree_params.features_per_split = std::max(
        1, static_cast<int>(std::lround(params_.feature_fraction * d)));
  } else if (task == Task::kClassification) {
    tree_params.features_per_split =
        std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
  } else {
    tree_params.features_per_split = std::max(1, d / 3);
  }

  const std::size_t n = x.n_rows;
  std::vector<std::size_t> rows(n);
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    const std::uint64_t tree_seed = derive_seed(seed_, t);
    if (params_.bootstrap) {
      std::mt19937_64 rng(derive_seed(tree_seed, 0xb007));
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (auto& r : rows) r = pick(rng);
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    trees_[t].fit(x, y, rows, task, n_classes_, tree_params, tree_seed,
                  &importance_);
  }
  const double total = std::accumulate(importance_.begin(), importance_.end(), 0.0);
  if (total > 0) {
    for (auto& v : importance_) v /= total;
  }
}

std::vector<double> RandomForest::predict_score(const DesignMatrix& rows) const {
  check_schema(*this, rows);
  std::vector<double> out(rows.n_rows, 0.0);
  const double n_trees = static_cast<double>(trees_.size());
  for (std::size_t r = 0; r < rows.n_rows; ++r) {
    const auto row = rows.row(r);
    double acc = 0.0;
    for (const auto& tree : trees_) {
      const double p = tree.predict_row(row);
      acc += task_ == Task::kClassification ? (p == 0.0 ? 1.0 : 0.0) : p;
    }
    out[r] = acc / n_trees;
  }
  return out;
}

std::vector<double> RandomForest::predict(const DesignMatrix& rows) const {
  if (task_ == Task::kRegression) return predict_score(rows);
  check_schema(*this, rows);
  std::vector<double> out(rows.n_rows, 0.0);
  std::vector<double> votes(static_cast<std::size_t>(n_classes_));
  for (std::size_t r = 0; r < rows.n_rows; ++r) {
    std::fill(votes.begin(), votes.end(), 0.0);
    const auto row = rows.row(r);
    for (const auto& tree : trees_) {
      votes[static_cast<std::size_t>(tree.predict_row(row))] += 1.0;
    }
    out[r] = argmax_count(votes);
  }
  return out;
}

// ---------------------------------------------------------------------------
// k nearest neighbours

void KnnModel::fit(const DesignMatrix& x, std::span<const double> y, Task task,
                   int n_classes) {
  check_fit_input(x, y);
  check_classes(y, task);
  if (k_ < 1) fail(ErrorCode::kInvalidConfig, "knn k must be >= 1");
  task_ = task;
  n_classes_ = task == Task::kClassification ? n_classes : 0;
  n_inputs_ = x.n_cols;
  kinds_ = x.kinds;
  n_categories_ = x.n_categories;
  centers_.assign(x.n_cols, 0.0);
  scales_.assign(x.n_cols, 1.0);
  encoded_width_ = 0;
  std::vector<double> column(x.n_rows);
  for (std::size_t c = 0; c < x.n_cols; ++c) {
    if (kinds_[c] == FeatureKind::kCategorical) {
      encoded_width_ += static_cast<std::size_t>(n_categories_[c]);
      continue;
    }
    for (std::size_t r = 0; r < x.n_rows; ++r) column[r] = x.at(r, c);
    centers_[c] = mean(column);
    const double s = population_std(column);
    scales_[c] = s > 0 ? s : 1.0;
    encoded_width_ += 1;
  }
  train_.clear();
  train_.reserve(x.n_rows * encoded_width_);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const auto encoded = encode_row(x.row(r));
    train_.insert(train_.end(), encoded.begin(), encoded.end());
  }
  labels_.assign(y.begin(), y.end());
}

std::vector<double> KnnModel::encode_row(std::span<const double> row) const {
  std::vector<double> out;
  out.reserve(encoded_width_);
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (kinds_[c] == FeatureKind::kCategorical) {
      for (int level = 0; level < n_categories_[c]; ++level) {
        out.push_back(row[c] == level ? 1.0 : 0.0);
      }
    } else {
      out.push_back((row[c] - centers_[c]) / scales_[c]);
    }
  }
  return out;
}

std::vector<std::size_t> KnnModel::neighbours(
    std::span<const double> encoded) const {
  const std::size_t n = labels_.size();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    const double* t = train_.data() + i * encoded_width_;
    for (std::size_t j = 0; j < encoded_width_; ++j) {
      const double diff = encoded[j] - t[j];
      d += diff * diff;
    }
    dist[i] = {d, i};
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), n);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                    dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

std::vector<double> KnnModel::predict_score(const DesignMatrix& rows) const {
  check_schema(*this, rows);
  std::vector<double> out(rows.n_rows);
  for (std::size_t r = 0; r < rows.n_rows; ++r) {
    const auto nn = neighbours(encode_row(rows.row(r)));
    double acc = 0.0;
    for (const auto i : nn) {
      acc += task_ == Task::kClassification ? (labels_[i] == 0.0 ? 1.0 : 0.0)
                                            : labels_[i];
    }
    out[r] = acc / static_cast<double>(nn.size());
  }
  return out;
}

std::vector<double> KnnModel::predict(const DesignMatrix& rows) const {
  if (task_ == Task::kRegression) return predict_score(rows);
  check_schema(*this, rows);
  std::vector<double> out(rows.n_rows);
  std::vector<double> votes(static_cast<std::size_t>(n_classes_));
  for (std::size_t r = 0; r < rows.n_rows; ++r) {
    std::fill(votes.begin(), votes.end(), 0.0);
    for (const auto i : neighbours(encode_row(rows.row(r)))) {
      votes[static_cast<std::size_t>(labels_[i])] += 1.0;
    }
    out[r] = argmax_count(votes);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ridge

std::vector<double> RidgeModel::expand_row(std::span<const double> row) const {
  std::vector<double> out;
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (kinds_[c] == FeatureKind::kCategorical) {
      for (int level = 0; level < n_categories_[c]; ++level) {
        out.push_back(row[c] == level ? 1.0 : 0.0);
      }
    } else {
      out.push_back(row[c]);
    }
  }
  return out;
}

void RidgeModel::fit(const DesignMatrix& x, std::span<const double> y,
                     Task task, int /*n_classes*/) {
  if (task != Task::kRegression) {
    fail(ErrorCode::kInvalidConfig, "ridge supports regression targets only");
  }
  check_fit_input(x, y);
  n_inputs_ = x.n_cols;
  kinds_ = x.kinds;
  n_categories_ = x.n_categories;

  const auto n = static_cast<Eigen::Index>(x.n_rows);
  std::vector<std::vector<double>> expanded;
  expanded.reserve(x.n_rows);
  for (std::size_t r = 0; r < x.n_rows; ++r) expanded.push_back(expand_row(x.row(r)));
  const auto p = static_cast<Eigen::Index>(expanded.front().size());

  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd target(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < p; ++c) design(r, c) = expanded[r][c];
    target(r) = y[static_cast<std::size_t>(r)];
  }
  const Eigen::RowVectorXd x_mean = design.colwise().mean();
  const double y_mean = target.mean();
  design.rowwise() -= x_mean;
  target.array() -= y_mean;

  // Solve [X; sqrt(lambda) I] w = [y; 0] by least squares.
  Eigen::MatrixXd augmented(n + p, p);
  augmented.topRows(n) = design;
  augmented.bottomRows(p) =
      std::sqrt(std::max(lambda_, 0.0)) * Eigen::MatrixXd::Identity(p, p);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + p);
  rhs.head(n) = target;
  const Eigen::VectorXd w = augmented.colPivHouseholderQr().solve(rhs);

  weights_.assign(w.data(), w.data() + w.size());
  intercept_ = y_mean - x_mean.dot(w);
  fitted_ = true;
}

std::vector<double> RidgeModel::predict_score(const DesignMatrix& rows) const {
  check_schema(*this, rows);
  std::vector<double> out(rows.n_rows);
  for (std::size_t r = 0; r < rows.n_rows; ++r) {
    const auto e = expand_row(rows.row(r));
    double v = intercept_;
    for (std::size_t j = 0; j < e.size(); ++j) v += weights_[j] * e[j];
    out[r] = v;
  }
  return out;
}

std::vector<double> RidgeModel::predict(const DesignMatrix& rows) const {
  return predict_score(rows);
}

// ---------------------------------------------------------------------------
// Metrics and cross-validation

std::string_view metric_name(Metric metric) {
  return metric == Metric::kF1 ? "f1" : "one_minus_rae";
}

Metric parse_metric(std::string_view text) {
  if (text == "f1") return Metric::kF1;
  if (text == "rae" || text == "one_minus_rae") return Metric::kOneMinusRae;
  fail(ErrorCode::kInvalidConfig, "unknown metric '" + std::string(text) + "'");
}

Metric metric_for(Task task) {
  return task == Task::kClassification ? Metric::kF1 : Metric::kOneMinusRae;
}

double f1_score(std::span<const double> truth, std::span<const double> pred,
                int n_classes) {
  if (truth.size() != pred.size()) {
    fail(ErrorCode::kLengthMismatch, "f1_score: length mismatch");
  }
  const auto class_f1 = [&](double cls) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool t = truth[i] == cls;
      const bool p = pred[i] == cls;
      tp += (t && p) ? 1 : 0;
      fp += (!t && p) ? 1 : 0;
      fn += (t && !p) ? 1 : 0;
    }
    const double denom = 2 * tp + fp + fn;
    return denom > 0 ? 2 * tp / denom : 1.0;
  };
  if (n_classes == 2) return class_f1(1.0);
  std::set<double> labels(truth.begin(), truth.end());
  labels.insert(pred.begin(), pred.end());
  double acc = 0.0;
  for (const double cls : labels) acc += class_f1(cls);
  return labels.empty() ? 0.0 : acc / static_cast<double>(labels.size());
}

double one_minus_rae(std::span<const double> truth, std::span<const double> pred,
                     double reference_mean) {
  if (truth.size() != pred.size()) {
    fail(ErrorCode::kLengthMismatch, "one_minus_rae: length mismatch");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    num += std::abs(truth[i] - pred[i]);
    den += std::abs(truth[i] - reference_mean);
  }
  if (den <= 0) return num == 0 ? 1.0 : 0.0;
  return 1.0 - num / den;
}

std::vector<int> stratified_folds(const TargetColumn& target, int n_folds,
                                  std::uint64_t seed) {
  const auto& y = target.values();
  const std::size_t n = y.size();
  std::vector<int> strata(n, 0);
  if (target.task() == Task::kClassification) {
    for (std::size_t i = 0; i < n; ++i) strata[i] = static_cast<int>(y[i]);
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
    for (std::size_t rank = 0; rank < n; ++rank) {
      strata[order[rank]] = static_cast<int>(rank * n_folds / n);
    }
  }
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) members[strata[i]].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<int> fold(n, 0);
  std::size_t offset = 0;
  for (auto& [stratum, rows] : members) {
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      fold[rows[i]] = static_cast<int>((offset + i) % static_cast<std::size_t>(n_folds));
    }
    offset += rows.size();
  }
  return fold;
}

EvalResult evaluate_cv(const ModelSpec& spec, const FeatureTable& table,
                       std::uint64_t seed) {
  const auto& target = table.target();
  const std::size_t n = table.n_rows();
  if (n < 10) {
    fail(ErrorCode::kStratificationImpossible,
         "cross-validation needs at least 10 rows, got " + std::to_string(n));
  }
  if (table.n_cols() == 0) fail(ErrorCode::kEmptyFeatureSet, "no feature columns");
  if (target.task() == Task::kClassification) {
    std::map<int, int> counts;
    for (const double v : target.values()) ++counts[static_cast<int>(v)];
    for (const auto& [cls, count] : counts) {
      if (count < kNumFolds) {
        fail(ErrorCode::kStratificationImpossible,
             "class " + std::to_string(cls) + " has " + std::to_string(count) +
                 " members, need " + std::to_string(kNumFolds));
      }
    }
  }
  const auto folds = stratified_folds(target, kNumFolds, seed);
  const DesignMatrix x = design_matrix(table);
  const auto& y = target.values();

  EvalResult result;
  result.metric = metric_for(target.task());
  for (int k = 0; k < kNumFolds; ++k) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (folds[i] == k ? test_rows : train_rows).push_back(i);
    }
    const DesignMatrix x_train = x.take_rows(train_rows);
    const DesignMatrix x_test = x.take_rows(test_rows);
    std::vector<double> y_train, y_test;
    for (const auto i : train_rows) y_train.push_back(y[i]);
    for (const auto i : test_rows) y_test.push_back(y[i]);

    auto model = make_predictor(spec, derive_seed(seed, static_cast<std::uint64_t>(k)));
    model->fit(x_train, y_train, target.task(), target.n_classes());
    const auto pred = model->predict(x_test);
    const double value = result.metric == Metric::kF1
                             ? f1_score(y_test, pred, target.n_classes())
                             : one_minus_rae(y_test, pred, mean(y_train));
    result.per_fold.push_back(value);
  }
  result.value = mean(result.per_fold);
  return result;
}

}  // namespace featrecon
