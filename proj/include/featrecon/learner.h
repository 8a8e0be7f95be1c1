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

// Downstream predictors (random forest, kNN, ridge), metrics and stratified
// cross-validation.

#ifndef FEATRECON_LEARNER_H_
#define FEATRECON_LEARNER_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "featrecon/kinds.h"
#include "featrecon/tabular.h"

namespace featrecon {

// Dense row-major feature matrix. Categorical cells hold integer codes.
struct DesignMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> values;
  std::vector<FeatureKind> kinds;
  std::vector<int> n_categories;

  double at(std::size_t row, std::size_t col) const {
    return values[row * n_cols + col];
  }
  double& at(std::size_t row, std::size_t col) {
    return values[row * n_cols + col];
  }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * n_cols, n_cols};
  }

  DesignMatrix take_rows(std::span<const std::size_t> rows) const;
};

DesignMatrix design_matrix(const FeatureTable& table);

// Anything that maps rows to one real score per row. Partial dependence only
// needs this much of a model.
class ScoringModel {
 public:
  virtual ~ScoringModel() = default;
  // Classification: probability of class 0. Regression: predicted value.
  virtual std::vector<double> predict_score(const DesignMatrix& rows) const = 0;
  virtual bool is_fitted() const { return true; }
  // Number of input columns the model expects.
  virtual std::size_t n_inputs() const = 0;
};

enum class ModelKind { kRandomForest, kKnn, kRidge };

std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct ForestParams {
  int n_trees = 50;
  int max_depth = 8;
  int min_leaf = 2;
  // Features tried per split as a fraction of d; 0 picks sqrt(d) for
  // classification and d/3 for regression.
  double feature_fraction = 0.0;
  bool bootstrap = true;
};

struct ModelSpec {
  ModelKind kind = ModelKind::kRandomForest;
  ForestParams forest;
  int knn_k = 5;
  double ridge_lambda = 1.0;
};

class Predictor : public ScoringModel {
 public:
  // `n_classes` is ignored for regression.
  virtual void fit(const DesignMatrix& x, std::span<const double> y, Task task,
                   int n_classes) = 0;
  // Class codes (classification) or values (regression).
  virtual std::vector<double> predict(const DesignMatrix& rows) const = 0;
  // Normalized per-column importance; empty when the model has none.
  virtual std::vector<double> feature_importance() const { return {}; }
  virtual ModelKind kind() const = 0;

  void fit(const FeatureTable& table);
};

std::unique_ptr<Predictor> make_predictor(const ModelSpec& spec,
                                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// CART trees and forests. Exposed so the split search can be checked against a
// brute-force oracle.

struct TreeNode {
  bool is_leaf = true;
  int feature = -1;
  bool categorical_split = false;
  // Numerical: x <= threshold goes left. Categorical: x == threshold goes left.
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Majority class (classification) or mean (regression).
  double prediction = 0.0;
  std::size_t n_samples = 0;
};

struct TreeParams {
  int max_depth = 8;
  int min_leaf = 2;
  // Features examined per split; 0 or >= d means all.
  int features_per_split = 0;
};

class DecisionTree {
 public:
  void fit(const DesignMatrix& x, std::span<const double> y,
           std::span<const std::size_t> rows, Task task, int n_classes,
           const TreeParams& params, std::uint64_t seed,
           std::vector<double>* importance);

  double predict_row(std::span<const double> row) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  int build(const DesignMatrix& x, std::span<const double> y,
            std::vector<std::size_t>& rows, std::size_t begin, std::size_t end,
            int depth);

  std::vector<TreeNode> nodes_;
  // Per-fit scratch.
  Task task_ = Task::kClassification;
  int n_classes_ = 0;
  TreeParams params_;
  std::vector<double>* importance_ = nullptr;
  std::mt19937_64 rng_;
};

// Impurity score of a node: Gini (times count) for classification or the sum
// of squared deviations for regression. Both are "count-weighted" so a split's
// gain is parent - left - right.
double weighted_impurity(std::span<const double> y, Task task, int n_classes);

class RandomForest : public Predictor {
 public:
  RandomForest(ForestParams params, std::uint64_t seed)
      : params_(params), seed_(seed) {}

  using Predictor::fit;
  void fit(const DesignMatrix& x, std::span<const double> y, Task task,
           int n_classes) override;
  std::vector<double> predict_score(const DesignMatrix& rows) const override;
  std::vector<double> predict(const DesignMatrix& rows) const override;
  std::vector<double> feature_importance() const override { return importance_; }
  bool is_fitted() const override { return !trees_.empty(); }
  std::size_t n_inputs() const override { return n_inputs_; }
  ModelKind kind() const override { return ModelKind::kRandomForest; }

  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  ForestParams params_;
  std::uint64_t seed_;
  Task task_ = Task::kClassification;
  int n_classes_ = 0;
  std::size_t n_inputs_ = 0;
  std::vector<DecisionTree> trees_;
  std::vector<double> importance_;
};

class KnnModel : public Predictor {
 public:
  explicit KnnModel(int k) : k_(k) {}

  using Predictor::fit;
  void fit(const DesignMatrix& x, std::span<const double> y, Task task,
           int n_classes) override;
  std::vector<double> predict_score(const DesignMatrix& rows) const override;
  std::vector<double> predict(const DesignMatrix& rows) const override;
  bool is_fitted() const override { return !train_.empty(); }
  std::size_t n_inputs() const override { return n_inputs_; }
  ModelKind kind() const override { return ModelKind::kKnn; }

 private:
  std::vector<double> encode_row(std::span<const double> row) const;
  std::vector<std::size_t> neighbours(std::span<const double> encoded) const;

  int k_;
  Task task_ = Task::kClassification;
  int n_classes_ = 0;
  std::size_t n_inputs_ = 0;
  std::vector<FeatureKind> kinds_;
  std::vector<int> n_categories_;
  std::vector<double> centers_;
  std::vector<double> scales_;
  std::size_t encoded_width_ = 0;
  std::vector<double> train_;  // row-major encoded training rows
  std::vector<double> labels_;
};

// Ridge regression on one-hot expanded inputs with an unpenalized intercept.
class RidgeModel : public Predictor {
 public:
  explicit RidgeModel(double lambda) : lambda_(lambda) {}

  using Predictor::fit;
  void fit(const DesignMatrix& x, std::span<const double> y, Task task,
           int n_classes) override;
  std::vector<double> predict_score(const DesignMatrix& rows) const override;
  std::vector<double> predict(const DesignMatrix& rows) const override;
  bool is_fitted() const override { return fitted_; }
  std::size_t n_inputs() const override { return n_inputs_; }
  ModelKind kind() const override { return ModelKind::kRidge; }

  // Weights over the expanded inputs (numerical columns as-is, categorical
  // columns as one indicator per level).
  const std::vector<double>& weights() const { return weights_; }
  double intercept() const { return intercept_; }

 private:
  std::vector<double> expand_row(std::span<const double> row) const;

  double lambda_;
  bool fitted_ = false;
  std::size_t n_inputs_ = 0;
  std::vector<FeatureKind> kinds_;
  std::vector<int> n_categories_;
  std::vector<double> weights_;
  double intercept_ = 0.0;
};

// ---------------------------------------------------------------------------
// Metrics and cross-validation.

enum class Metric { kF1, kOneMinusRae };

std::string_view metric_name(Metric metric);
// Accepts f1, rae/one_minus_rae.
Metric parse_metric(std::string_view text);
Metric metric_for(Task task);

// Binary F1 of class 1 when n_classes == 2, macro F1 otherwise.
double f1_score(std::span<const double> truth, std::span<const double> pred,
                int n_classes);

// 1 - sum|y - pred| / sum|y - reference_mean|.
double one_minus_rae(std::span<const double> truth, std::span<const double> pred,
                     double reference_mean);

struct EvalResult {
  Metric metric = Metric::kF1;
  double value = 0.0;
  std::vector<double> per_fold;
};

inline constexpr int kNumFolds = 5;

// Fold id per row: stratified by class, or by target quintile for regression.
std::vector<int> stratified_folds(const TargetColumn& target, int n_folds,
                                  std::uint64_t seed);

EvalResult evaluate_cv(const ModelSpec& spec, const FeatureTable& table,
                       std::uint64_t seed);

}  // namespace featrecon

#endif  // FEATRECON_LEARNER_H_
