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

#include "featrecon/tabular.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "featrecon/error.h"

namespace featrecon {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool is_missing_token(std::string_view token) {
  token = trim(token);
  if (token.empty() || token == "?") return true;
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower == "na" || lower == "n/a" || lower == "nan" || lower == "null";
}

// Parses a decimal number. Returns nullopt for anything that is not a
// complete numeric literal.
std::optional<double> parse_number(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    return std::nullopt;
  }
  return value;
}

std::string cell_position(std::size_t row, const std::string& column) {
  return "row " + std::to_string(row) + ", column '" + column + "'";
}

void render_into(const LineageNode& node, std::string& out) {
  if (node.is_leaf()) {
    out += node.leaf_name();
    return;
  }
  out += op_name(node.op());
  out += '(';
  for (std::size_t i = 0; i < node.children().size(); ++i) {
    if (i > 0) out += ", ";
    render_into(*node.children()[i], out);
  }
  out += ')';
}

// Splits "a, f(b, c)" at top-level ", " separators.
std::vector<std::string_view> split_arguments(std::string_view text) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    } else if (c == ',' && depth == 0 && i + 1 < text.size() &&
               text[i + 1] == ' ') {
      parts.push_back(text.substr(start, i - start));
      start = i + 2;
      ++i;
    }
  }
  parts.push_back(text.substr(start));
  return parts;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lineage

LineagePtr LineageNode::leaf(std::string name) {
  auto node = std::shared_ptr<LineageNode>(new LineageNode());
  node->name_ = std::move(name);
  node->order_ = 1;
  return node;
}

LineagePtr LineageNode::node(OpId op, std::vector<LineagePtr> children) {
  const int arity = op_spec(op).arity;
  if (static_cast<int>(children.size()) != arity) {
    fail(ErrorCode::kArityMismatch,
         std::string(op_name(op)) + " expects " + std::to_string(arity) +
             " children, got " + std::to_string(children.size()));
  }
  auto node = std::shared_ptr<LineageNode>(new LineageNode());
  node->op_ = op;
  int max_child = 0;
  for (const auto& child : children) {
    if (!child) fail(ErrorCode::kInvalidArgument, "null lineage child");
    max_child = std::max(max_child, child->order());
  }
  node->order_ = 1 + max_child;
  node->children_ = std::move(children);
  return node;
}

void LineageNode::collect_leaves(std::vector<std::string>& out) const {
  if (is_leaf()) {
    out.push_back(name_);
    return;
  }
  for (const auto& child : children_) child->collect_leaves(out);
}

std::string render_lineage(const LineageNode& node) {
  std::string out;
  render_into(node, out);
  return out;
}

LineagePtr parse_lineage(std::string_view text) {
  const auto open = text.find('(');
  if (open != std::string_view::npos && !text.empty() && text.back() == ')') {
    const auto op = op_from_name(text.substr(0, open));
    if (op.has_value()) {
      const auto inner = text.substr(open + 1, text.size() - open - 2);
      const auto args = split_arguments(inner);
      if (static_cast<int>(args.size()) == op_spec(*op).arity) {
        std::vector<LineagePtr> children;
        children.reserve(args.size());
        for (const auto arg : args) children.push_back(parse_lineage(arg));
        return LineageNode::node(*op, std::move(children));
      }
    }
  }
  return LineageNode::leaf(std::string(text));
}

bool lineage_equal(const LineageNode& a, const LineageNode& b) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.leaf_name() == b.leaf_name();
  if (a.op() != b.op() || a.children().size() != b.children().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!lineage_equal(*a.children()[i], *b.children()[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Columns and tables

FeatureColumn::FeatureColumn(LineagePtr lineage, FeatureKind kind,
                             std::vector<double> values, int n_categories)
    : lineage_(std::move(lineage)),
      kind_(kind),
      values_(std::move(values)),
      n_categories_(kind == FeatureKind::kCategorical ? n_categories : 0) {
  if (!lineage_) fail(ErrorCode::kInvalidArgument, "column without lineage");
  name_ = render_lineage(*lineage_);
  if (kind_ == FeatureKind::kNumerical) {
    for (const double v : values_) {
      if (!std::isfinite(v)) {
        fail(ErrorCode::kInvalidArgument,
             "non-finite value in numerical column '" + name_ + "'");
      }
    }
    return;
  }
  if (n_categories_ < 1 && !values_.empty()) {
    fail(ErrorCode::kInvalidArgument,
         "categorical column '" + name_ + "' needs n_categories >= 1");
  }
  std::vector<char> seen(static_cast<std::size_t>(std::max(n_categories_, 0)), 0);
  for (const double v : values_) {
    if (v != std::floor(v) || v < 0 || v >= n_categories_) {
      fail(ErrorCode::kInvalidArgument,
           "categorical column '" + name_ + "' has out-of-range code");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
  if (!values_.empty() &&
      std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    fail(ErrorCode::kInvalidArgument,
         "categorical column '" + name_ + "' codes are not dense");
  }
}

FeatureColumn FeatureColumn::original(std::string name, FeatureKind kind,
                                      std::vector<double> values,
                                      int n_categories) {
  return FeatureColumn(LineageNode::leaf(std::move(name)), kind,
                       std::move(values), n_categories);
}

bool FeatureColumn::is_constant() const {
  return std::adjacent_find(values_.begin(), values_.end(),
                            std::not_equal_to<>()) == values_.end();
}

TargetColumn::TargetColumn(std::string name, Task task,
                           std::vector<double> values,
                           std::vector<std::string> class_labels)
    : name_(std::move(name)),
      task_(task),
      values_(std::move(values)),
      class_labels_(std::move(class_labels)) {
  if (task_ == Task::kRegression) {
    for (const double v : values_) {
      if (!std::isfinite(v)) {
        fail(ErrorCode::kInvalidArgument, "non-finite regression target");
      }
    }
    return;
  }
  std::set<int> classes;
  int max_code = -1;
  for (const double v : values_) {
    if (v != std::floor(v) || v < 0) {
      fail(ErrorCode::kInvalidArgument, "class codes must be non-negative integers");
    }
    classes.insert(static_cast<int>(v));
    max_code = std::max(max_code, static_cast<int>(v));
  }
  if (classes.size() < 2) {
    fail(ErrorCode::kSingleClassTarget,
         "classification target '" + name_ + "' has fewer than two classes");
  }
  n_classes_ = max_code + 1;
}

FeatureTable::FeatureTable(std::vector<ColumnPtr> columns,
                           std::shared_ptr<const TargetColumn> target)
    : columns_(std::move(columns)), target_(std::move(target)) {
  if (!target_) fail(ErrorCode::kInvalidArgument, "table without target");
  n_rows_ = target_->size();
  if (n_rows_ == 0) fail(ErrorCode::kEmptyTable, "table has no rows");
  if (columns_.empty()) fail(ErrorCode::kEmptyTable, "table has no feature columns");
  std::unordered_set<std::string> names;
  for (const auto& column : columns_) {
    if (!column) fail(ErrorCode::kInvalidArgument, "null column");
    if (column->size() != n_rows_) {
      fail(ErrorCode::kRowCountMismatch,
           "column '" + column->name() + "' has " +
               std::to_string(column->size()) + " rows, expected " +
               std::to_string(n_rows_));
    }
    if (column->name() == target_->name()) {
      fail(ErrorCode::kDuplicateColumn,
           "target '" + target_->name() + "' appears among the features");
    }
    if (!names.insert(column->name()).second) {
      fail(ErrorCode::kDuplicateColumn,
           "duplicate column name '" + column->name() + "'");
    }
  }
}

std::optional<std::size_t> FeatureTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i]->name() == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> FeatureTable::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& column : columns_) names.push_back(column->name());
  return names;
}

FeatureTable FeatureTable::with_column(ColumnPtr column) const {
  auto columns = columns_;
  columns.push_back(std::move(column));
  return FeatureTable(std::move(columns), target_);
}

FeatureTable FeatureTable::select(std::span<const std::size_t> indices) const {
  std::vector<ColumnPtr> columns;
  columns.reserve(indices.size());
  for (const auto i : indices) columns.push_back(columns_.at(i));
  return FeatureTable(std::move(columns), target_);
}

// ---------------------------------------------------------------------------
// CSV ingestion

FeatureKind infer_kind(std::span<const std::string> tokens, int cat_threshold) {
  if (tokens.empty()) {
    fail(ErrorCode::kInvalidArgument, "infer_kind on an empty column");
  }
  std::set<double> uniques;
  for (const auto& token : tokens) {
    const auto value = parse_number(token);
    if (!value.has_value()) return FeatureKind::kCategorical;
    uniques.insert(*value);
  }
  return static_cast<int>(uniques.size()) <= cat_threshold
             ? FeatureKind::kCategorical
             : FeatureKind::kNumerical;
}

std::vector<std::vector<std::string>> parse_csv_records(std::istream& input) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  char c;
  auto end_record = [&]() {
    record.push_back(std::move(field));
    field.clear();
    // A blank line yields a single empty field; skip it.
    if (!(record.size() == 1 && record[0].empty() && !field_started)) {
      records.push_back(std::move(record));
    }
    record.clear();
    field_started = false;
  };
  while (input.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (input.peek() == '"') {
          input.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r') {
      if (input.peek() == '\n') input.get(c);
      end_record();
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) {
    fail(ErrorCode::kUnparsableCell,
         "unterminated quoted field in record " + std::to_string(records.size()));
  }
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

FeatureTable read_csv(std::istream& input, const CsvOptions& options) {
  const auto records = parse_csv_records(input);
  if (records.empty()) fail(ErrorCode::kEmptyTable, "no header row");
  const auto& header = records.front();
  const std::size_t n_rows = records.size() - 1;
  const std::size_t n_fields = header.size();

  std::optional<std::size_t> target_index;
  for (std::size_t c = 0; c < n_fields; ++c) {
    if (std::string(trim(header[c])) == options.target_name) target_index = c;
  }
  if (!target_index.has_value()) {
    fail(ErrorCode::kMissingTarget,
         "target column '" + options.target_name + "' not in header");
  }
  if (n_rows == 0) fail(ErrorCode::kEmptyTable, "header only, no data rows");

  // Column-major token storage; validates shape and missing cells.
  std::vector<std::vector<std::string>> tokens(n_fields);
  for (auto& column : tokens) column.reserve(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto& record = records[r + 1];
    if (record.size() != n_fields) {
      const std::size_t col = std::min(record.size(), n_fields - 1);
      fail(ErrorCode::kUnparsableCell,
           cell_position(r, std::string(trim(header[col]))) + ": expected " +
               std::to_string(n_fields) + " fields, got " +
               std::to_string(record.size()));
    }
    for (std::size_t c = 0; c < n_fields; ++c) {
      const auto& cell = record[c];
      if (is_missing_token(cell)) {
        fail(ErrorCode::kMissingValue,
             cell_position(r, std::string(trim(header[c]))));
      }
      const auto value = parse_number(cell);
      if (value.has_value() && !std::isfinite(*value)) {
        fail(ErrorCode::kUnparsableCell,
             cell_position(r, std::string(trim(header[c]))) +
                 ": non-finite number");
      }
      tokens[c].emplace_back(trim(cell));
    }
  }

  std::vector<ColumnPtr> columns;
  for (std::size_t c = 0; c < n_fields; ++c) {
    if (c == *target_index) continue;
    const std::string name(trim(header[c]));
    const auto& column_tokens = tokens[c];
    const FeatureKind kind = infer_kind(column_tokens, options.cat_threshold);
    std::vector<double> values(n_rows);
    if (kind == FeatureKind::kNumerical) {
      for (std::size_t r = 0; r < n_rows; ++r) {
        values[r] = *parse_number(column_tokens[r]);
      }
      columns.push_back(std::make_shared<const FeatureColumn>(
          FeatureColumn::original(name, kind, std::move(values))));
      continue;
    }
    // Codes by first appearance. Numeric tokens are keyed by value so that
    // "1" and "1.0" share a code.
    std::map<std::string, int> string_codes;
    std::map<double, int> numeric_codes;
    int next_code = 0;
    for (std::size_t r = 0; r < n_rows; ++r) {
      const auto numeric = parse_number(column_tokens[r]);
      int code;
      if (numeric.has_value()) {
        auto [it, inserted] = numeric_codes.emplace(*numeric, next_code);
        if (inserted) ++next_code;
        code = it->second;
      } else {
        auto [it, inserted] = string_codes.emplace(column_tokens[r], next_code);
        if (inserted) ++next_code;
        code = it->second;
      }
      values[r] = code;
    }
    columns.push_back(std::make_shared<const FeatureColumn>(
        FeatureColumn::original(name, kind, std::move(values), next_code)));
  }

  const auto& target_tokens = tokens[*target_index];
  std::vector<double> target_values(n_rows);
  std::vector<std::string> class_labels;
  if (options.task == Task::kRegression) {
    for (std::size_t r = 0; r < n_rows; ++r) {
      const auto value = parse_number(target_tokens[r]);
      if (!value.has_value()) {
        fail(ErrorCode::kUnparsableCell,
             cell_position(r, options.target_name) +
                 ": regression target must be numeric");
      }
      target_values[r] = *value;
    }
  } else {
    // All-numeric labels are coded by ascending value so that a 0/1 target
    // keeps 1 as the positive class; other labels by first appearance.
    bool all_numeric = true;
    for (const auto& token : target_tokens) {
      if (!parse_number(token).has_value()) {
        all_numeric = false;
        break;
      }
    }
    if (all_numeric) {
      std::map<double, int> codes;
      for (const auto& token : target_tokens) codes.emplace(*parse_number(token), 0);
      int next = 0;
      for (auto& [value, code] : codes) {
        code = next++;
        for (const auto& token : target_tokens) {
          if (*parse_number(token) == value) {
            class_labels.push_back(token);
            break;
          }
        }
      }
      for (std::size_t r = 0; r < n_rows; ++r) {
        target_values[r] = codes.at(*parse_number(target_tokens[r]));
      }
    } else {
      std::unordered_map<std::string, int> codes;
      for (std::size_t r = 0; r < n_rows; ++r) {
        auto [it, inserted] =
            codes.emplace(target_tokens[r], static_cast<int>(codes.size()));
        if (inserted) class_labels.push_back(target_tokens[r]);
        target_values[r] = it->second;
      }
    }
  }
  auto target = std::make_shared<const TargetColumn>(
      options.target_name, options.task, std::move(target_values),
      std::move(class_labels));
  return FeatureTable(std::move(columns), std::move(target));
}

FeatureTable load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream input(path, std::ios::binary);
  if (!input) fail(ErrorCode::kIoFailure, "cannot open '" + path + "'");
  return read_csv(input, options);
}

}  // namespace featrecon
