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

#include "featrecon/ops.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "featrecon/error.h"
#include "featrecon/stats.h"

namespace featrecon {
namespace {

double sign_nonzero(double x) { return x < 0 ? -1.0 : 1.0; }

double cap(double x) {
  if (std::isnan(x)) return 0.0;
  return std::clamp(x, -kMagnitudeCap, kMagnitudeCap);
}

double unary_value(OpId op, double x) {
  switch (op) {
    case OpId::kAbs: return std::abs(x);
    case OpId::kSquare: return x * x;
    case OpId::kCube: return x * x * x;
    case OpId::kSqrtSafe: return std::sqrt(std::abs(x));
    case OpId::kLogSafe: return std::log(std::abs(x) + kSafeEpsilon);
    case OpId::kReciprocalSafe:
      return sign_nonzero(x) / (std::abs(x) + kSafeEpsilon);
    case OpId::kExpSafe: return std::exp(std::clamp(x, -kExpClamp, kExpClamp));
    case OpId::kSin: return std::sin(x);
    case OpId::kCos: return std::cos(x);
    case OpId::kTanh: return std::tanh(x);
    case OpId::kSigmoid: return 1.0 / (1.0 + std::exp(-x));
    case OpId::kRound: return std::round(x);
    default: break;
  }
  fail(ErrorCode::kInvalidArgument,
       "not an elementwise unary operator: " + std::string(op_name(op)));
}

std::vector<double> apply_unary_numeric(OpId op, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  if (op == OpId::kZscore) {
    const double m = mean(x);
    const double s = population_std(x);
    for (std::size_t i = 0; i < n; ++i) out[i] = s > 0 ? (x[i] - m) / s : 0.0;
  } else if (op == OpId::kMinmax) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double range = n > 0 ? *hi - *lo : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = range > 0 ? (x[i] - *lo) / range : 0.0;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = unary_value(op, x[i]);
  }
  for (auto& v : out) v = cap(v);
  return out;
}

std::vector<double> frequency(const FeatureColumn& f) {
  std::vector<double> counts(static_cast<std::size_t>(f.n_categories()), 0.0);
  for (const double code : f.values()) counts[static_cast<std::size_t>(code)] += 1.0;
  const double n = static_cast<double>(f.size());
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = counts[static_cast<std::size_t>(f.values()[i])] / n;
  }
  return out;
}

std::vector<double> apply_binary_numeric(OpId op, const std::vector<double>& a,
                                         const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double v = 0.0;
    switch (op) {
      case OpId::kAdd: v = a[i] + b[i]; break;
      case OpId::kSub: v = a[i] - b[i]; break;
      case OpId::kMul: v = a[i] * b[i]; break;
      case OpId::kDivSafe:
        v = a[i] / (sign_nonzero(b[i]) * (std::abs(b[i]) + kSafeEpsilon));
        break;
      default:
        fail(ErrorCode::kInvalidArgument, "not a numeric binary operator");
    }
    out[i] = cap(v);
  }
  return out;
}

// Dense codes for observed (a, b) pairs in first-appearance order.
std::pair<std::vector<double>, int> combine_codes(const FeatureColumn& a,
                                                  const FeatureColumn& b) {
  std::map<std::pair<int, int>, int> codes;
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto key = std::make_pair(static_cast<int>(a.values()[i]),
                                    static_cast<int>(b.values()[i]));
    const auto [it, inserted] =
        codes.emplace(key, static_cast<int>(codes.size()));
    out[i] = it->second;
  }
  return {std::move(out), static_cast<int>(codes.size())};
}

double group_statistic(OpId op, std::vector<double>& members) {
  switch (op) {
    case OpId::kGroupbyThenMin:
      return *std::min_element(members.begin(), members.end());
    case OpId::kGroupbyThenMax:
      return *std::max_element(members.begin(), members.end());
    case OpId::kGroupbyThenMean: return mean(members);
    case OpId::kGroupbyThenMedian:
      std::sort(members.begin(), members.end());
      return sorted_quantile(members, 0.5);
    case OpId::kGroupbyThenStd: return population_std(members);
    case OpId::kGroupbyThenSum: {
      double sum = 0.0;
      for (const double v : members) sum += v;
      return sum;
    }
    default: break;
  }
  fail(ErrorCode::kInvalidArgument, "not a group operator");
}

std::vector<double> group_broadcast(OpId op, const FeatureColumn& key,
                                    const FeatureColumn& value) {
  std::vector<std::vector<double>> groups(
      static_cast<std::size_t>(key.n_categories()));
  for (std::size_t i = 0; i < key.size(); ++i) {
    groups[static_cast<std::size_t>(key.values()[i])].push_back(value.values()[i]);
  }
  std::vector<double> stat(groups.size(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (!groups[g].empty()) stat[g] = cap(group_statistic(op, groups[g]));
  }
  std::vector<double> out(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) {
    out[i] = stat[static_cast<std::size_t>(key.values()[i])];
  }
  return out;
}

}  // namespace

bool is_valid(OpId op, FeatureKind k1, std::optional<FeatureKind> k2) {
  const auto& spec = op_spec(op);
  if ((spec.arity == 2) != k2.has_value()) {
    fail(ErrorCode::kArityMismatch,
         std::string(spec.name) + " has arity " + std::to_string(spec.arity));
  }
  if (k1 != spec.arg0) return false;
  return spec.arity == 1 || *k2 == spec.arg1;
}

bool argument_accepts(OpId op, int position, FeatureKind kind) {
  const auto& spec = op_spec(op);
  if (position < 0 || position >= spec.arity) {
    fail(ErrorCode::kArityMismatch, "argument position out of range");
  }
  return (position == 0 ? spec.arg0 : spec.arg1) == kind;
}

FeatureColumn apply(OpId op, const FeatureColumn& f1, const FeatureColumn* f2) {
  const auto& spec = op_spec(op);
  if ((spec.arity == 2) != (f2 != nullptr)) {
    fail(ErrorCode::kArityMismatch,
         std::string(spec.name) + " has arity " + std::to_string(spec.arity));
  }
  const std::optional<FeatureKind> k2 =
      f2 ? std::optional<FeatureKind>(f2->kind()) : std::nullopt;
  if (!is_valid(op, f1.kind(), k2)) {
    std::string kinds(kind_name(f1.kind()));
    if (f2) kinds += ", " + std::string(kind_name(f2->kind()));
    fail(ErrorCode::kInvalidPair,
         std::string(spec.name) + " does not accept (" + kinds + ")");
  }
  if (f2 && f2->size() != f1.size()) {
    fail(ErrorCode::kRowCountMismatch,
         "operands have " + std::to_string(f1.size()) + " and " +
             std::to_string(f2->size()) + " rows");
  }

  std::vector<LineagePtr> children{f1.lineage()};
  if (f2) children.push_back(f2->lineage());
  auto lineage = LineageNode::node(op, std::move(children));

  if (spec.arity == 1) {
    if (op == OpId::kFreq) {
      return FeatureColumn(std::move(lineage), FeatureKind::kNumerical,
                           frequency(f1));
    }
    return FeatureColumn(std::move(lineage), FeatureKind::kNumerical,
                         apply_unary_numeric(op, f1.values()));
  }
  if (op == OpId::kCombine) {
    auto [codes, n_codes] = combine_codes(f1, *f2);
    return FeatureColumn(std::move(lineage), FeatureKind::kCategorical,
                         std::move(codes), n_codes);
  }
  if (spec.arg0 == FeatureKind::kCategorical) {
    return FeatureColumn(std::move(lineage), FeatureKind::kNumerical,
                         group_broadcast(op, f1, *f2));
  }
  return FeatureColumn(std::move(lineage), FeatureKind::kNumerical,
                       apply_binary_numeric(op, f1.values(), f2->values()));
}

std::vector<double> one_hot(OpId op) {
  std::vector<double> out(kNumOperators, 0.0);
  out[static_cast<std::size_t>(op_index(op_spec(op).id))] = 1.0;
  return out;
}

}  // namespace featrecon
