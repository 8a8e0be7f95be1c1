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

// Columnar dataset model. Columns and tables are immutable once built and are
// shared by pointer, so deriving a new table from an old one only copies the
// column list.

#ifndef FEATRECON_TABULAR_H_
#define FEATRECON_TABULAR_H_

#include <cstddef>
#include <istream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "featrecon/kinds.h"
#include "featrecon/operators.h"

namespace featrecon {

inline constexpr int kDefaultCatThreshold = 10;

class LineageNode;
using LineagePtr = std::shared_ptr<const LineageNode>;

// Expression tree recording how a column was produced. A leaf names an
// original column; an inner node applies an operator to 1 or 2 children.
class LineageNode {
 public:
  static LineagePtr leaf(std::string name);
  static LineagePtr node(OpId op, std::vector<LineagePtr> children);

  bool is_leaf() const { return children_.empty(); }
  // Valid only for leaves.
  const std::string& leaf_name() const { return name_; }
  // Valid only for inner nodes.
  OpId op() const { return op_; }
  const std::vector<LineagePtr>& children() const { return children_; }
  // 1 for leaves, 1 + max(child order) otherwise.
  int order() const { return order_; }

  // Names of every leaf, left to right (duplicates kept).
  void collect_leaves(std::vector<std::string>& out) const;

 private:
  LineageNode() = default;

  std::string name_;
  OpId op_ = OpId::kAbs;
  std::vector<LineagePtr> children_;
  int order_ = 1;
};

// Prefix notation: `op(child, child)`; leaves render as their name.
std::string render_lineage(const LineageNode& node);

// Inverse of render_lineage. Any text that is not `known_op(args)` is a leaf.
LineagePtr parse_lineage(std::string_view text);

bool lineage_equal(const LineageNode& a, const LineageNode& b);

class FeatureColumn {
 public:
  // Categorical values are integer codes stored as doubles; n_categories must
  // be given for categorical columns and every code in [0, n_categories) must
  // occur. Numerical values must be finite.
  FeatureColumn(LineagePtr lineage, FeatureKind kind, std::vector<double> values,
                int n_categories = 0);

  static FeatureColumn original(std::string name, FeatureKind kind,
                                std::vector<double> values,
                                int n_categories = 0);

  const std::string& name() const { return name_; }
  FeatureKind kind() const { return kind_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  int n_categories() const { return n_categories_; }
  int order() const { return lineage_->order(); }
  const LineagePtr& lineage() const { return lineage_; }
  bool is_original() const { return lineage_->is_leaf(); }
  bool is_constant() const;

 private:
  LineagePtr lineage_;
  std::string name_;
  FeatureKind kind_;
  std::vector<double> values_;
  int n_categories_;
};

using ColumnPtr = std::shared_ptr<const FeatureColumn>;

class TargetColumn {
 public:
  // Classification values are class codes in [0, n_classes) with at least two
  // classes present; regression values are finite reals.
  TargetColumn(std::string name, Task task, std::vector<double> values,
               std::vector<std::string> class_labels = {});

  const std::string& name() const { return name_; }
  Task task() const { return task_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  int n_classes() const { return n_classes_; }
  const std::vector<std::string>& class_labels() const { return class_labels_; }

 private:
  std::string name_;
  Task task_;
  std::vector<double> values_;
  int n_classes_ = 0;
  std::vector<std::string> class_labels_;
};

class FeatureTable {
 public:
  FeatureTable(std::vector<ColumnPtr> columns,
               std::shared_ptr<const TargetColumn> target);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return columns_.size(); }
  const FeatureColumn& column(std::size_t i) const { return *columns_.at(i); }
  const ColumnPtr& column_ptr(std::size_t i) const { return columns_.at(i); }
  const std::vector<ColumnPtr>& columns() const { return columns_; }
  const TargetColumn& target() const { return *target_; }
  const std::shared_ptr<const TargetColumn>& target_ptr() const {
    return target_;
  }

  std::optional<std::size_t> find(std::string_view name) const;
  std::vector<std::string> column_names() const;

  // Returns a new table with `column` appended.
  FeatureTable with_column(ColumnPtr column) const;
  // Returns a new table keeping the given column indices, in the given order.
  FeatureTable select(std::span<const std::size_t> indices) const;

 private:
  std::vector<ColumnPtr> columns_;
  std::shared_ptr<const TargetColumn> target_;
  std::size_t n_rows_;
};

// Non-numeric tokens make a column categorical; so do numeric columns with at
// most `cat_threshold` distinct values.
FeatureKind infer_kind(std::span<const std::string> tokens, int cat_threshold);

struct CsvOptions {
  std::string target_name;
  Task task = Task::kClassification;
  int cat_threshold = kDefaultCatThreshold;
};

FeatureTable read_csv(std::istream& input, const CsvOptions& options);
FeatureTable load_csv(const std::string& path, const CsvOptions& options);

// Splits CSV text into records (RFC-4180 quoting, CRLF tolerated).
std::vector<std::vector<std::string>> parse_csv_records(std::istream& input);

}  // namespace featrecon

#endif  // FEATRECON_TABULAR_H_
