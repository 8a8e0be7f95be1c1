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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "featrecon/engine.h"
#include "featrecon/error.h"
#include "featrecon/interaction.h"
#include "featrecon/learner.h"
#include "featrecon/ops.h"
#include "featrecon/staterep.h"
#include "featrecon/synthetic.h"
#include "featrecon/tabular.h"

namespace py = pybind11;
using namespace featrecon;

namespace {

std::size_t index_by_name(const FeatureTable& table, const std::string& name) {
  const auto index = table.find(name);
  if (!index.has_value()) fail(ErrorCode::kInvalidArgument, "no column '" + name + "'");
  return *index;
}

const FeatureColumn& column_by_name(const FeatureTable& table, const std::string& name) {
  return table.column(index_by_name(table, name));
}

py::dict record_to_dict(const IterationRecord& r) {
  py::dict d;
  d["step"] = r.step;
  d["episode"] = r.episode;
  d["op"] = r.op;
  d["f1"] = r.f1;
  d["f2"] = r.f2;
  d["outcome"] = std::string(step_outcome_name(r.outcome));
  d["new_feature"] = r.new_feature;
  d["u_f1"] = r.u_f1;
  d["u_f2"] = r.u_f2;
  d["h"] = r.h;
  d["r_op"] = r.r_op;
  d["r_f1"] = r.r_f1;
  d["r_f2"] = r.r_f2;
  d["v_at"] = r.v_at;
  d["v_opt"] = r.v_opt;
  d["n_features"] = r.n_features;
  return d;
}

}  // namespace

PYBIND11_MODULE(_featrecon, m) {
  m.doc() = "Feature-space reconstruction engine";
  static py::exception<Error> error_type(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, e.what());
    }
  });

  py::class_<FeatureColumn, std::shared_ptr<FeatureColumn>>(m, "FeatureColumn")
      .def_property_readonly("name", &FeatureColumn::name)
      .def_property_readonly("kind", [](const FeatureColumn& c) {
        return std::string(kind_name(c.kind()));
      })
      .def_property_readonly("order", &FeatureColumn::order)
      .def_property_readonly("values", &FeatureColumn::values);

  py::class_<FeatureTable, std::shared_ptr<FeatureTable>>(m, "FeatureTable")
      .def_property_readonly("n_rows", &FeatureTable::n_rows)
      .def_property_readonly("n_cols", &FeatureTable::n_cols)
      .def_property_readonly("column_names", &FeatureTable::column_names)
      .def_property_readonly("target", [](const FeatureTable& t) { return t.target().values(); })
      .def("column", [](const FeatureTable& t, const std::string& name) {
        return std::make_shared<FeatureColumn>(column_by_name(t, name));
      });

  m.def("load_csv",
        [](const std::string& path, const std::string& target, const std::string& task,
           int cat_threshold) {
          return std::make_shared<FeatureTable>(
              load_csv(path, CsvOptions{target, parse_task(task), cat_threshold}));
        },
        py::arg("path"), py::arg("target"), py::arg("task") = "classification",
        py::arg("cat_threshold") = kDefaultCatThreshold);

  m.def("read_csv_text",
        [](const std::string& text, const std::string& target, const std::string& task,
           int cat_threshold) {
          std::istringstream in(text);
          return std::make_shared<FeatureTable>(
              read_csv(in, CsvOptions{target, parse_task(task), cat_threshold}));
        },
        py::arg("text"), py::arg("target"), py::arg("task") = "classification",
        py::arg("cat_threshold") = kDefaultCatThreshold);

  m.def("synthetic_csv",
        [](const std::string& kind, std::size_t rows, std::size_t noise, std::uint64_t seed) {
          return synthetic_csv(parse_synthetic_kind(kind), rows, noise, seed);
        },
        py::arg("kind"), py::arg("rows") = 500, py::arg("noise") = 5, py::arg("seed") = 0);

  m.def("synthetic_table",
        [](const std::string& kind, std::size_t rows, std::size_t noise, std::uint64_t seed) {
          return std::make_shared<FeatureTable>(
              synthetic_table(parse_synthetic_kind(kind), rows, noise, seed));
        },
        py::arg("kind"), py::arg("rows") = 500, py::arg("noise") = 5, py::arg("seed") = 0);

  m.def("operators", [] {
    std::vector<std::string> names;
    for (const auto& spec : operator_table()) names.emplace_back(spec.name);
    return names;
  });

  m.def("apply",
        [](const std::string& op, const FeatureTable& table, const std::string& f1,
           std::optional<std::string> f2) {
          const auto id = op_from_name(op);
          if (!id.has_value()) fail(ErrorCode::kInvalidArgument, "unknown operator '" + op + "'");
          const FeatureColumn* second = f2 ? &column_by_name(table, *f2) : nullptr;
          return std::make_shared<FeatureColumn>(
              featrecon::apply(*id, column_by_name(table, f1), second));
        },
        py::arg("op"), py::arg("table"), py::arg("f1"), py::arg("f2") = py::none());

  m.def("rep_featureset",
        [](const FeatureTable& table) { return rep_featureset(table).values; });

  m.def("mutual_information",
        [](const std::vector<double>& a, const std::vector<double>& b, int bins) {
          return mutual_information(a, FeatureKind::kNumerical, b, FeatureKind::kNumerical,
                                    bins);
        },
        py::arg("a"), py::arg("b"), py::arg("bins") = kDefaultMiBins);

  m.def("evaluate_cv",
        [](const FeatureTable& table, const std::string& model, std::uint64_t seed) {
          ModelSpec spec;
          spec.kind = parse_model_kind(model);
          return evaluate_cv(spec, table, seed).value;
        },
        py::arg("table"), py::arg("model") = "rf", py::arg("seed") = 0);

  m.def("h_statistic",
        [](const FeatureTable& table, const std::string& a, const std::string& b,
           std::size_t sample_cap, std::uint64_t seed) {
          auto forest = make_predictor(ModelSpec{}, seed);
          forest->fit(table);
          const auto data = design_matrix(table);
          return h_statistic_pair(*forest, data, index_by_name(table, a),
                                  index_by_name(table, b), sample_cap,
                                  seed)
              .value;
        },
        py::arg("table"), py::arg("a"), py::arg("b"), py::arg("sample_cap") = kDefaultSampleCap,
        py::arg("seed") = kDefaultPdSeed);

  m.def("reconstruct",
        [](const FeatureTable& table, int episodes, int steps, std::uint64_t seed,
           const std::string& model, const std::string& interaction, int n_trees) {
          EngineConfig config;
          config.episodes = episodes;
          config.steps_per_episode = steps;
          config.seed = seed;
          config.model.kind = parse_model_kind(model);
          config.model.forest.n_trees = n_trees;
          config.interaction_method = parse_interaction_method(interaction);
          const auto result = reconstruct(table, config);
          py::dict out;
          out["baseline"] = result.baseline;
          out["v_opt"] = result.best.v_opt;
          out["best_iteration"] = result.best.iteration;
          out["best_features"] = result.best.table->column_names();
          py::list trace;
          for (const auto& r : result.trace) trace.append(record_to_dict(r));
          out["trace"] = trace;
          return out;
        },
        py::arg("table"), py::arg("episodes") = 2, py::arg("steps") = 5, py::arg("seed") = 0,
        py::arg("model") = "rf", py::arg("interaction") = "h", py::arg("n_trees") = 50);
}
