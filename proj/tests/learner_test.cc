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

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "featrecon/error.h"
#include "featrecon/learner.h"
#include "gtest/gtest.h"

namespace featrecon {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no featrecon::Error thrown";
  return ErrorCode::kInvalidArgument;
}

DesignMatrix matrix(const std::vector<std::vector<double>>& cols,
                    const std::vector<FeatureKind>& kinds) {
  DesignMatrix x;
  x.n_cols = cols.size();
  x.n_rows = cols.front().size();
  x.kinds = kinds;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    int k = 0;
    if (kinds[c] == FeatureKind::kCategorical) {
      for (const double v : cols[c]) k = std::max(k, static_cast<int>(v) + 1);
    }
    x.n_categories.push_back(k);
  }
  x.values.resize(x.n_rows * x.n_cols);
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    for (std::size_t c = 0; c < x.n_cols; ++c) x.at(r, c) = cols[c][r];
  }
  return x;
}

double oracle_impurity(const std::vector<double>& y, Task task) {
  if (y.empty()) return 0;
  const double n = static_cast<double>(y.size());
  if (task == Task::kClassification) {
    std::map<double, double> counts;
    for (const double v : y) counts[v] += 1;
    double g = 1;
    for (const auto& [cls, c] : counts) g -= (c / n) * (c / n);
    return n * g;
  }
  double m = 0;
  for (const double v : y) m += v / n;
  double s = 0;
  for (const double v : y) s += (v - m) * (v - m);
  return s;
}

double split_gain(const DesignMatrix& x, const std::vector<double>& y, Task task, int f,
                  bool categorical, double threshold) {
  std::vector<double> left, right;
  for (std::size_t r = 0; r < x.n_rows; ++r) {
    const double v = x.at(r, f);
    const bool go_left = categorical ? v == threshold : v <= threshold;
    (go_left ? left : right).push_back(y[r]);
  }
  if (left.empty() || right.empty()) return -1;
  return oracle_impurity(y, task) - oracle_impurity(left, task) - oracle_impurity(right, task);
}

// Best gain over every feature and every candidate threshold.
double brute_force_best(const DesignMatrix& x, const std::vector<double>& y, Task task) {
  double best = 0;
  for (std::size_t f = 0; f < x.n_cols; ++f) {
    std::set<double> values;
    for (std::size_t r = 0; r < x.n_rows; ++r) values.insert(x.at(r, f));
    const bool cat = x.kinds[f] == FeatureKind::kCategorical;
    std::vector<double> sorted(values.begin(), values.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (cat) {
        best = std::max(best, split_gain(x, y, task, f, true, sorted[i]));
      } else if (i + 1 < sorted.size()) {
        best = std::max(best, split_gain(x, y, task, f, false,
                                         0.5 * (sorted[i] + sorted[i + 1])));
      }
    }
  }
  return best;
}

TEST(DecisionTreeTest, RootSplitMatchesBruteForce) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> c(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 25 + trial;
    std::vector<double> a(n), b(n), g(n), yc(n), yr(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::round(u(rng) * 8) / 8;
      b[i] = u(rng);
      g[i] = c(rng);
      yc[i] = (a[i] + (g[i] == 2 ? 0.7 : 0.0) + 0.3 * u(rng)) > 0.2 ? 1 : 0;
      yr[i] = 2 * b[i] + (g[i] == 1 ? 1.5 : 0.0) + 0.2 * u(rng);
    }
    const auto x = matrix({a, b, g}, {FeatureKind::kNumerical, FeatureKind::kNumerical,
                                      FeatureKind::kCategorical});
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    for (const auto& [task, y] : {std::pair{Task::kClassification, yc},
                                  std::pair{Task::kRegression, yr}}) {
      DecisionTree tree;
      tree.fit(x, y, rows, task, 2, TreeParams{1, 1, 0}, 1, nullptr);
      const auto& root = tree.nodes().at(0);
      const double best = brute_force_best(x, y, task);
      if (best <= 1e-12) {
        EXPECT_TRUE(root.is_leaf);
        continue;
      }
      ASSERT_FALSE(root.is_leaf);
      EXPECT_EQ(root.categorical_split, x.kinds[root.feature] == FeatureKind::kCategorical);
      const double gain =
          split_gain(x, y, task, root.feature, root.categorical_split, root.threshold);
      EXPECT_NEAR(gain, best, 1e-9 * (1 + best)) << "trial " << trial;
    }
  }
}

TEST(DecisionTreeTest, ImpurityDefinition) {
  const std::vector<double> y = {0, 0, 1, 2};
  EXPECT_NEAR(weighted_impurity(y, Task::kClassification, 3),
              oracle_impurity(y, Task::kClassification), 1e-12);
  EXPECT_NEAR(weighted_impurity(y, Task::kRegression, 0), oracle_impurity(y, Task::kRegression),
              1e-12);
}

TEST(DecisionTreeTest, RespectsDepthAndLeafSize) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(200), y(200);
  for (std::size_t i = 0; i < 200; ++i) {
    a[i] = u(rng);
    y[i] = std::sin(6 * a[i]);
  }
  const auto x = matrix({a}, {FeatureKind::kNumerical});
  std::vector<std::size_t> rows(200);
  std::iota(rows.begin(), rows.end(), 0);
  DecisionTree tree;
  tree.fit(x, y, rows, Task::kRegression, 0, TreeParams{3, 7, 0}, 1, nullptr);
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf) EXPECT_GE(node.n_samples, 7u);
  }
  std::function<int(int)> depth = [&](int i) -> int {
    const auto& node = tree.nodes()[i];
    return node.is_leaf ? 0 : 1 + std::max(depth(node.left), depth(node.right));
  };
  EXPECT_LE(depth(0), 3);
}

FeatureTable xor_table(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(n), b(n), noise(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
    noise[i] = u(rng);
    y[i] = a[i] * b[i] > 0 ? 1 : 0;
  }
  std::vector<ColumnPtr> cols = {
      std::make_shared<const FeatureColumn>(
          FeatureColumn::original("a", FeatureKind::kNumerical, a)),
      std::make_shared<const FeatureColumn>(
          FeatureColumn::original("b", FeatureKind::kNumerical, b)),
      std::make_shared<const FeatureColumn>(
          FeatureColumn::original("noise", FeatureKind::kNumerical, noise))};
  return FeatureTable(cols, std::make_shared<const TargetColumn>("y", Task::kClassification, y));
}

TEST(RandomForestTest, DeterministicAndAccurate) {
  const auto t = xor_table(300, 1);
  RandomForest f1(ForestParams{}, 9), f2(ForestParams{}, 9);
  f1.fit(t);
  f2.fit(t);
  const auto x = design_matrix(t);
  EXPECT_EQ(f1.predict_score(x), f2.predict_score(x));
  const auto pred = f1.predict(x);
  double correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == t.target().values()[i];
  EXPECT_GT(correct / pred.size(), 0.9);
  const auto imp = f1.feature_importance();
  ASSERT_EQ(imp.size(), 3u);
  EXPECT_NEAR(imp[0] + imp[1] + imp[2], 1.0, 1e-9);
  EXPECT_LT(imp[2], imp[0]);
  EXPECT_LT(imp[2], imp[1]);
  for (const double s : f1.predict_score(x)) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(RandomForestTest, SchemaErrors) {
  const auto t = xor_table(50, 2);
  RandomForest f(ForestParams{}, 1);
  const auto x = design_matrix(t);
  EXPECT_EQ(code_of([&] { f.predict(x); }), ErrorCode::kModelNotTrained);
  f.fit(t);
  DesignMatrix narrow = x;
  narrow.n_cols = 2;
  narrow.kinds.resize(2);
  narrow.n_categories.resize(2);
  narrow.values.resize(narrow.n_rows * 2);
  EXPECT_EQ(code_of([&] { f.predict(narrow); }), ErrorCode::kSchemaMismatch);
  std::vector<double> single(50, 1.0);
  EXPECT_EQ(code_of([&] { f.fit(x, single, Task::kClassification, 2); }),
            ErrorCode::kSingleClassTarget);
}

TEST(KnnTest, NearestNeighbourVote) {
  const auto x = matrix({{0, 0.1, 0.2, 5, 5.1, 5.2}}, {FeatureKind::kNumerical});
  const std::vector<double> y = {0, 0, 0, 1, 1, 1};
  KnnModel knn(3);
  knn.fit(x, y, Task::kClassification, 2);
  const auto q = matrix({{0.05, 4.9}}, {FeatureKind::kNumerical});
  EXPECT_EQ(knn.predict(q), (std::vector<double>{0, 1}));
  const std::vector<double> yr = {1, 1, 1, 3, 3, 3};
  KnnModel reg(3);
  reg.fit(x, yr, Task::kRegression, 0);
  const auto p = reg.predict(q);
  EXPECT_NEAR(p[0], 1.0, 1e-12);
  EXPECT_NEAR(p[1], 3.0, 1e-12);
}

// Solves (Xc'Xc + lambda I) w = Xc'yc by Gaussian elimination.
std::vector<double> oracle_ridge(const std::vector<std::vector<double>>& cols,
                                 const std::vector<double>& y, double lambda) {
  const std::size_t p = cols.size(), n = y.size();
  std::vector<double> mean(p, 0.0);
  double ym = 0;
  for (std::size_t c = 0; c < p; ++c) {
    for (const double v : cols[c]) mean[c] += v / n;
  }
  for (const double v : y) ym += v / n;
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t r = 0; r < n; ++r) {
        a[i][j] += (cols[i][r] - mean[i]) * (cols[j][r] - mean[j]);
      }
    }
    a[i][i] += lambda;
    for (std::size_t r = 0; r < n; ++r) a[i][p] += (cols[i][r] - mean[i]) * (y[r] - ym);
  }
  for (std::size_t k = 0; k < p; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < p; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    }
    std::swap(a[k], a[piv]);
    for (std::size_t i = 0; i < p; ++i) {
      if (i == k) continue;
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j <= p; ++j) a[i][j] -= f * a[k][j];
    }
  }
  std::vector<double> w(p);
  for (std::size_t i = 0; i < p; ++i) w[i] = a[i][p] / a[i][i];
  return w;
}

TEST(RidgeTest, MatchesNormalEquations) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0, 1);
  std::vector<std::vector<double>> cols(3, std::vector<double>(40));
  std::vector<double> y(40);
  for (std::size_t r = 0; r < 40; ++r) {
    for (auto& c : cols) c[r] = g(rng);
    y[r] = 1.5 * cols[0][r] - 2 * cols[1][r] + 0.1 * g(rng) + 4;
  }
  const auto x = matrix(cols, std::vector<FeatureKind>(3, FeatureKind::kNumerical));
  for (const double lambda : {0.0, 0.5, 10.0}) {
    RidgeModel ridge(lambda);
    ridge.fit(x, y, Task::kRegression, 0);
    const auto w = oracle_ridge(cols, y, lambda);
    ASSERT_EQ(ridge.weights().size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(ridge.weights()[i], w[i], 1e-9);
  }
  RidgeModel ridge(1.0);
  EXPECT_EQ(code_of([&] { ridge.fit(x, y, Task::kClassification, 2); }),
            ErrorCode::kInvalidConfig);
}

TEST(MetricsTest, F1AndRae) {
  const std::vector<double> t = {1, 1, 0, 0, 1};
  const std::vector<double> p = {1, 0, 0, 1, 1};
  // tp 2, fp 1, fn 1.
  EXPECT_NEAR(f1_score(t, p, 2), 4.0 / 6.0, 1e-12);
  const std::vector<double> zeros = {0, 0, 0};
  EXPECT_EQ(f1_score(zeros, zeros, 2), 1.0);
  const std::vector<double> tm = {0, 1, 2, 2};
  const std::vector<double> pm = {0, 2, 2, 1};
  // Class 0: 1; class 1: 0; class 2: 2*1/(2+1+1) = 0.5.
  EXPECT_NEAR(f1_score(tm, pm, 3), (1.0 + 0.0 + 0.5) / 3.0, 1e-12);
  const std::vector<double> yt = {1, 2, 3};
  const std::vector<double> yp = {1, 2, 4};
  EXPECT_NEAR(one_minus_rae(yt, yp, 2.0), 1.0 - 1.0 / 2.0, 1e-12);
  EXPECT_EQ(metric_for(Task::kClassification), Metric::kF1);
  EXPECT_EQ(metric_for(Task::kRegression), Metric::kOneMinusRae);
  EXPECT_EQ(parse_metric("rae"), Metric::kOneMinusRae);
}

TEST(CrossValidationTest, StratifiedFolds) {
  std::vector<double> y(103);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = i % 3 == 0 ? 1 : 0;
  const TargetColumn target("y", Task::kClassification, y);
  const auto folds = stratified_folds(target, 5, 3);
  EXPECT_EQ(folds, stratified_folds(target, 5, 3));
  for (const double cls : {0.0, 1.0}) {
    std::vector<int> per(5, 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == cls) ++per[folds[i]];
    }
    EXPECT_LE(*std::max_element(per.begin(), per.end()) -
                  *std::min_element(per.begin(), per.end()),
              1);
  }
  std::vector<double> yr(50);
  for (std::size_t i = 0; i < 50; ++i) yr[i] = static_cast<double>(i * i);
  const TargetColumn reg("y", Task::kRegression, yr);
  const auto rf = stratified_folds(reg, 5, 1);
  std::vector<int> sizes(5, 0);
  for (const int f : rf) ++sizes[f];
  EXPECT_EQ(sizes, (std::vector<int>{10, 10, 10, 10, 10}));
}

TEST(CrossValidationTest, EvaluateAndErrors) {
  const auto t = xor_table(200, 3);
  const ModelSpec spec;
  const auto a = evaluate_cv(spec, t, 5);
  const auto b = evaluate_cv(spec, t, 5);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.per_fold.size(), 5u);
  EXPECT_GT(a.value, 0.8);
  double m = 0;
  for (const double v : a.per_fold) m += v / 5;
  EXPECT_NEAR(a.value, m, 1e-12);

  const auto tiny = xor_table(8, 1);
  EXPECT_EQ(code_of([&] { evaluate_cv(spec, tiny, 1); }), ErrorCode::kStratificationImpossible);
  std::vector<double> y(20, 0.0);
  y[0] = 1;
  y[1] = 1;
  std::vector<ColumnPtr> cols = {std::make_shared<const FeatureColumn>(
      FeatureColumn::original("a", FeatureKind::kNumerical, std::vector<double>(20, 1.0)))};
  const FeatureTable rare(cols,
                          std::make_shared<const TargetColumn>("y", Task::kClassification, y));
  EXPECT_EQ(code_of([&] { evaluate_cv(spec, rare, 1); }), ErrorCode::kStratificationImpossible);
}

TEST(ModelFactoryTest, Kinds) {
  EXPECT_EQ(parse_model_kind("rf"), ModelKind::kRandomForest);
  EXPECT_EQ(parse_model_kind("knn"), ModelKind::kKnn);
  EXPECT_EQ(parse_model_kind("ridge"), ModelKind::kRidge);
  EXPECT_EQ(code_of([] { parse_model_kind("svm"); }), ErrorCode::kInvalidConfig);
  ModelSpec spec;
  spec.kind = ModelKind::kKnn;
  EXPECT_EQ(make_predictor(spec, 1)->kind(), ModelKind::kKnn);
}

}  // namespace
}  // namespace featrecon
