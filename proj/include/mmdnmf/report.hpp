#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mmdnmf/errors.hpp"
#include "mmdnmf/experiment.hpp"
#include "mmdnmf/solver.hpp"

// JSON documents written by the CLI. Doubles are emitted in shortest
// round-trip form, so reading a document back reproduces every number exactly.

namespace mmdnmf {

using json = nlohmann::json;

inline void to_json(json& j, const SolverConfig& c) {
  j = json{{"rank", c.rank},         {"a", c.a},       {"b", c.b},
           {"max_iter", c.max_iter}, {"tol", c.tol},   {"seed", c.seed},
           {"slack_mode", std::string(to_string(c.slack_mode))}, {"guard", c.guard}};
}

inline void from_json(const json& j, SolverConfig& c) {
  j.at("rank").get_to(c.rank);
  j.at("a").get_to(c.a);
  j.at("b").get_to(c.b);
  j.at("max_iter").get_to(c.max_iter);
  j.at("tol").get_to(c.tol);
  j.at("seed").get_to(c.seed);
  c.slack_mode = parse_slack_mode(j.at("slack_mode").get<std::string>());
  j.at("guard").get_to(c.guard);
}

inline void to_json(json& j, const IterationRecord& r) {
  j = json{{"reconstruction_error", r.reconstruction_error},
           {"epsilon", r.epsilon},
           {"zeta", r.zeta},
           {"objective", r.objective},
           {"max_within_dist", r.max_within_dist},
           {"min_between_dist", r.min_between_dist}};
}

inline void from_json(const json& j, IterationRecord& r) {
  j.at("reconstruction_error").get_to(r.reconstruction_error);
  j.at("epsilon").get_to(r.epsilon);
  j.at("zeta").get_to(r.zeta);
  j.at("objective").get_to(r.objective);
  j.at("max_within_dist").get_to(r.max_within_dist);
  j.at("min_between_dist").get_to(r.min_between_dist);
}

inline void to_json(json& j, const EvalResult& e) {
  j = json{{"knn_accuracy", e.knn_accuracy},
           {"max_within_dist", e.max_within_dist},
           {"min_between_dist", e.min_between_dist},
           {"reconstruction_error", e.reconstruction_error}};
}

inline void from_json(const json& j, EvalResult& e) {
  j.at("knn_accuracy").get_to(e.knn_accuracy);
  j.at("max_within_dist").get_to(e.max_within_dist);
  j.at("min_between_dist").get_to(e.min_between_dist);
  j.at("reconstruction_error").get_to(e.reconstruction_error);
}

inline void to_json(json& j, const MethodSummary& s) {
  j = json{{"method", s.method},
           {"iterations_run", s.iterations_run},
           {"converged", s.converged},
           {"trace", s.trace},
           {"eval", s.eval}};
}

inline void from_json(const json& j, MethodSummary& s) {
  j.at("method").get_to(s.method);
  j.at("iterations_run").get_to(s.iterations_run);
  j.at("converged").get_to(s.converged);
  s.trace = j.value("trace", std::vector<IterationRecord>{});
  j.at("eval").get_to(s.eval);
}

inline json matrix_to_json(const DataMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline DataMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("matrix must be a non-empty array of rows");
  const auto cols = j.front().size();
  RowMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError("matrix rows must have equal length");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return DataMatrix(std::move(m));
}

namespace detail {

template <typename Fn>
auto parse_document(std::istream& in, Fn&& fn) {
  try {
    const json doc = json::parse(in);
    return fn(doc);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace detail

/// `{"kind": "run", ...}` document; the per-iteration traces are dropped when
/// include_trace is false.
inline json report_to_json(const RunReport& r, bool include_trace = true) {
  json j{{"kind", "run"},
         {"version", r.version},
         {"config", r.config},
         {"test_fraction", r.test_fraction},
         {"split_seed", r.split_seed},
         {"projection_iters", r.projection_iters},
         {"knn_k", r.knn_k},
         {"train_count", r.train_count},
         {"test_count", r.test_count},
         {"baseline", r.baseline},
         {"mmdnmf", r.mmdnmf},
         {"wall_clock_seconds", r.wall_clock_seconds}};
  if (!include_trace) {
    j["baseline"].erase("trace");
    j["mmdnmf"].erase("trace");
  }
  return j;
}

inline RunReport report_from_json(const json& j) {
  if (j.value("kind", std::string{}) != "run") throw SchemaError("document is not a run report");
  RunReport r;
  j.at("version").get_to(r.version);
  j.at("config").get_to(r.config);
  j.at("test_fraction").get_to(r.test_fraction);
  j.at("split_seed").get_to(r.split_seed);
  j.at("projection_iters").get_to(r.projection_iters);
  j.at("knn_k").get_to(r.knn_k);
  j.at("train_count").get_to(r.train_count);
  j.at("test_count").get_to(r.test_count);
  j.at("baseline").get_to(r.baseline);
  j.at("mmdnmf").get_to(r.mmdnmf);
  j.at("wall_clock_seconds").get_to(r.wall_clock_seconds);
  return r;
}

inline void write_report(std::ostream& out, const RunReport& r, bool include_trace = true) {
  out << report_to_json(r, include_trace).dump(2) << '\n';
}

inline RunReport read_report(std::istream& in) {
  return detail::parse_document(in, [](const json& doc) { return report_from_json(doc); });
}

/// A fitted factorization together with the training labels, as written by
/// `mmdnmf fit` and consumed by `mmdnmf eval`.
struct FittedModel {
  std::string method;
  SolverConfig config;
  FitReport fit;
  LabelVector labels;
  std::vector<std::string> feature_names;
  EvalResult train_eval;
  std::string version = std::string(kVersion);

  friend bool operator==(const FittedModel&, const FittedModel&) = default;
};

inline json model_to_json(const FittedModel& m, bool include_trace = true) {
  const auto& f = m.fit.final_factorization;
  json j{{"kind", "fit"},
         {"version", m.version},
         {"method", m.method},
         {"config", m.config},
         {"converged", m.fit.converged},
         {"iterations_run", m.fit.iterations.size()},
         {"train_eval", m.train_eval},
         {"labels", m.labels.values()},
         {"feature_names", m.feature_names},
         {"basis", matrix_to_json(f.basis())},
         {"coeffs", matrix_to_json(f.coeffs())}};
  if (include_trace) j["trace"] = m.fit.iterations;
  return j;
}

inline FittedModel model_from_json(const json& j) {
  if (j.value("kind", std::string{}) != "fit") throw SchemaError("document is not a fit report");
  FitReport fit{j.value("trace", std::vector<IterationRecord>{}), j.at("converged").get<bool>(),
                Factorization(matrix_from_json(j.at("basis")), matrix_from_json(j.at("coeffs")))};
  FittedModel m{j.at("method").get<std::string>(),
                j.at("config").get<SolverConfig>(),
                std::move(fit),
                LabelVector(j.at("labels").get<std::vector<std::string>>()),
                j.value("feature_names", std::vector<std::string>{}),
                j.at("train_eval").get<EvalResult>(),
                j.at("version").get<std::string>()};
  if (m.labels.size() != m.fit.final_factorization.coeffs().cols()) {
    throw SchemaError("fit report has " + std::to_string(m.labels.size()) + " labels for " +
                      std::to_string(m.fit.final_factorization.coeffs().cols()) + " coefficient columns");
  }
  return m;
}

inline void write_model(std::ostream& out, const FittedModel& m, bool include_trace = true) {
  out << model_to_json(m, include_trace).dump(2) << '\n';
}

inline FittedModel read_model(std::istream& in) {
  return detail::parse_document(in, [](const json& doc) { return model_from_json(doc); });
}

/// Fits `method` ("mmdnmf" or "baseline") on the whole dataset.
inline FittedModel fit_model(const Dataset& data, const SolverConfig& config, const std::string& method) {
  FitReport fit = [&] {
    if (method == "mmdnmf") return fit_mmdnmf(data.matrix, data.labels, config);
    if (method == "baseline") return fit_baseline(data.matrix, config);
    throw ConfigError("unknown method '" + method + "' (expected mmdnmf or baseline)");
  }();
  EvalResult train_eval;
  train_eval.reconstruction_error = reconstruction_error(data.matrix, fit.final_factorization);
  const auto pairs = build_pair_sets(data.labels);
  if (!pairs.between.empty()) {
    const auto margins = margin_stats(fit.final_factorization.coeffs(), pairs);
    train_eval.max_within_dist = margins.max_within;
    train_eval.min_between_dist = margins.min_between;
  }
  const auto& coeffs = fit.final_factorization.coeffs();
  train_eval.knn_accuracy = knn_accuracy(coeffs, data.labels, coeffs, data.labels, 1);
  return {method, config, std::move(fit), data.labels, data.feature_names, train_eval};
}

/// Encodes `test` with the model's basis and scores it against the model's
/// training coefficients.
inline EvalResult evaluate_model(const FittedModel& model, const Dataset& test, std::size_t projection_iters,
                                 std::size_t k) {
  const auto& f = model.fit.final_factorization;
  if (test.matrix.rows() != f.basis().rows()) {
    throw DimensionError("test data has " + std::to_string(test.matrix.rows()) + " features, model expects " +
                         std::to_string(f.basis().rows()));
  }
  const auto coeffs = project_columns(f.basis(), test.matrix, projection_iters, model.config.guard);
  EvalResult out = model.train_eval;
  out.knn_accuracy = knn_accuracy(f.coeffs(), model.labels, coeffs, test.labels, k);
  out.reconstruction_error = detail::frobenius_sq(test.matrix.values(), f.basis().values() * coeffs.values());
  return out;
}

}  // namespace mmdnmf
