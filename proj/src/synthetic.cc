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

#include "featrecon/synthetic.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "featrecon/error.h"
#include "featrecon/stats.h"

namespace featrecon {
namespace {

constexpr std::array<double, 4> kGroupShift = {-1.5, -0.5, 0.5, 1.5};

std::string format_double(double v) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

}  // namespace

std::string_view synthetic_kind_name(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kProductSignal: return "product_signal";
    case SyntheticKind::kAdditiveSignal: return "additive_signal";
    case SyntheticKind::kGroupSignal: return "group_signal";
  }
  return "unknown";
}

SyntheticKind parse_synthetic_kind(std::string_view text) {
  for (const auto kind : {SyntheticKind::kProductSignal, SyntheticKind::kAdditiveSignal,
                          SyntheticKind::kGroupSignal}) {
    if (text == synthetic_kind_name(kind)) return kind;
  }
  fail(ErrorCode::kInvalidConfig, "unknown synthetic kind '" + std::string(text) + "'");
}

Task synthetic_task(SyntheticKind kind) {
  return kind == SyntheticKind::kProductSignal ? Task::kClassification
                                               : Task::kRegression;
}

std::string synthetic_csv(SyntheticKind kind, std::size_t rows,
                          std::size_t noise_features, std::uint64_t seed) {
  if (rows < kMinSyntheticRows) {
    fail(ErrorCode::kInvalidConfig,
         "synthetic data needs at least " + std::to_string(kMinSyntheticRows) + " rows");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> a(rows), b(rows), y(rows);
  std::vector<int> group(rows, 0);
  if (kind == SyntheticKind::kGroupSignal) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(kGroupShift.size()) - 1);
    for (std::size_t i = 0; i < rows; ++i) {
      group[i] = pick(rng);
      a[i] = uniform(rng) + kGroupShift[group[i]];
    }
  } else {
    for (std::size_t i = 0; i < rows; ++i) {
      a[i] = uniform(rng);
      b[i] = uniform(rng);
    }
  }
  std::vector<std::vector<double>> noise(noise_features, std::vector<double>(rows));
  for (auto& column : noise) {
    for (auto& v : column) v = uniform(rng);
  }

  switch (kind) {
    case SyntheticKind::kProductSignal: {
      std::vector<double> product(rows);
      for (std::size_t i = 0; i < rows; ++i) product[i] = a[i] * b[i];
      std::vector<double> sorted = product;
      std::sort(sorted.begin(), sorted.end());
      const double median = sorted_quantile(sorted, 0.5);
      for (std::size_t i = 0; i < rows; ++i) y[i] = product[i] > median ? 1.0 : 0.0;
      break;
    }
    case SyntheticKind::kAdditiveSignal:
      for (std::size_t i = 0; i < rows; ++i) y[i] = a[i] + b[i] + 0.1 * normal(rng);
      break;
    case SyntheticKind::kGroupSignal: {
      std::array<double, 4> sum{}, count{};
      for (std::size_t i = 0; i < rows; ++i) {
        sum[group[i]] += a[i];
        count[group[i]] += 1.0;
      }
      for (std::size_t i = 0; i < rows; ++i) {
        y[i] = 2.0 * sum[group[i]] / count[group[i]] + 0.1 * normal(rng);
      }
      break;
    }
  }

  std::ostringstream out;
  if (kind == SyntheticKind::kGroupSignal) {
    out << "g,x1";
  } else {
    out << "x1,x2";
  }
  for (std::size_t k = 0; k < noise_features; ++k) out << ",noise" << (k + 1);
  out << ",y\n";
  for (std::size_t i = 0; i < rows; ++i) {
    if (kind == SyntheticKind::kGroupSignal) {
      out << 'g' << group[i] << ',' << format_double(a[i]);
    } else {
      out << format_double(a[i]) << ',' << format_double(b[i]);
    }
    for (const auto& column : noise) out << ',' << format_double(column[i]);
    if (kind == SyntheticKind::kProductSignal) {
      out << ',' << static_cast<int>(y[i]) << '\n';
    } else {
      out << ',' << format_double(y[i]) << '\n';
    }
  }
  return out.str();
}

void write_synthetic(const std::string& path, SyntheticKind kind, std::size_t rows,
                     std::size_t noise_features, std::uint64_t seed) {
  const std::string text = synthetic_csv(kind, rows, noise_features, seed);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoFailure, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::kIoFailure, "write failed for '" + path + "'");
}

FeatureTable synthetic_table(SyntheticKind kind, std::size_t rows,
                             std::size_t noise_features, std::uint64_t seed,
                             int cat_threshold) {
  std::istringstream in(synthetic_csv(kind, rows, noise_features, seed));
  return read_csv(in, CsvOptions{kSyntheticTarget, synthetic_task(kind), cat_threshold});
}

}  // namespace featrecon
