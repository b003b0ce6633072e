#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mmdnmf/errors.hpp"
#include "mmdnmf/matrix.hpp"
#include "mmdnmf/pairing.hpp"

namespace mmdnmf {

/// Samples as columns of a nonnegative matrix, plus their labels.
struct Dataset {
  DataMatrix matrix;
  LabelVector labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> sample_ids;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

namespace detail {

inline std::vector<std::string> split_line(std::string_view line, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

}  // namespace detail

/**
 * Reads a delimited text file with a header row, one sample per row.
 *
 * Every column other than `label_column` (and `id_column`, when non-empty)
 * is a feature and must hold a finite nonnegative number. Rows are transposed
 * so that samples become matrix columns. Nothing is returned unless the whole
 * file parses.
 */
inline Dataset load_dataset(const std::string& path, const std::string& label_column, char delimiter = ',',
                            const std::string& id_column = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line) || detail::trim(line).empty()) {
    throw SchemaError("'" + path + "' is empty or has no header row");
  }
  const auto header = detail::split_line(detail::trim(line), delimiter);
  std::ptrdiff_t label_idx = -1;
  std::ptrdiff_t id_idx = -1;
  std::vector<std::size_t> feature_idx;
  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(detail::trim(header[c]));
    if (name == label_column) {
      label_idx = static_cast<std::ptrdiff_t>(c);
    } else if (!id_column.empty() && name == id_column) {
      id_idx = static_cast<std::ptrdiff_t>(c);
    } else {
      feature_idx.push_back(c);
      feature_names.push_back(name);
    }
  }
  if (label_idx < 0) throw SchemaError("label column '" + label_column + "' not found in header of '" + path + "'");
  if (!id_column.empty() && id_idx < 0) {
    throw SchemaError("id column '" + id_column + "' not found in header of '" + path + "'");
  }
  if (feature_idx.empty()) throw SchemaError("'" + path + "' has no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  std::vector<std::string> ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto cells = detail::split_line(trimmed, delimiter);
    if (cells.size() != header.size()) {
      throw SchemaError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                        " cells, header has " + std::to_string(header.size()));
    }
    std::vector<double> row;
    row.reserve(feature_idx.size());
    for (std::size_t k = 0; k < feature_idx.size(); ++k) {
      const auto cell = detail::trim(cells[feature_idx[k]]);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      const std::string where = "line " + std::to_string(line_no) + ", column '" + feature_names[k] + "'";
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(value)) {
        throw ValidationError("non-numeric feature value '" + std::string(cell) + "' at " + where);
      }
      if (value < 0.0) throw ValidationError("negative feature value " + std::string(cell) + " at " + where);
      row.push_back(value);
    }
    rows.push_back(std::move(row));
    labels.emplace_back(detail::trim(cells[static_cast<std::size_t>(label_idx)]));
    if (id_idx >= 0) ids.emplace_back(detail::trim(cells[static_cast<std::size_t>(id_idx)]));
  }
  if (rows.empty()) throw SchemaError("'" + path + "' has a header but no data rows");

  RowMatrix m(static_cast<Eigen::Index>(feature_idx.size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t s = 0; s < rows.size(); ++s)
    for (std::size_t f = 0; f < feature_idx.size(); ++f)
      m(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(s)) = rows[s][f];
  return {DataMatrix(std::move(m)), LabelVector(std::move(labels)), std::move(feature_names), std::move(ids)};
}

/// Writes `data` in the layout load_dataset reads, with the label in the last
/// column named `label_column` and numbers in shortest round-trip form.
inline void write_dataset(std::ostream& out, const Dataset& data, const std::string& label_column = "label",
                          char delimiter = ',') {
  const auto& m = data.matrix;
  std::vector<std::string> names = data.feature_names;
  if (names.size() != m.rows()) {
    names.clear();
    for (std::size_t f = 0; f < m.rows(); ++f) names.push_back("f" + std::to_string(f + 1));
  }
  const bool with_ids = data.sample_ids.size() == m.cols();
  if (with_ids) out << "id" << delimiter;
  for (const auto& n : names) out << n << delimiter;
  out << label_column << '\n';
  for (std::size_t s = 0; s < m.cols(); ++s) {
    if (with_ids) out << data.sample_ids[s] << delimiter;
    for (std::size_t f = 0; f < m.rows(); ++f) out << detail::format_double(m(f, s)) << delimiter;
    out << data.labels[s] << '\n';
  }
}

inline void save_dataset(const std::string& path, const Dataset& data, const std::string& label_column = "label",
                         char delimiter = ',') {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_dataset(out, data, label_column, delimiter);
  if (!out) throw IoError("write to '" + path + "' failed");
}

/// Offset added to every class center so that clipping at zero stays rare.
inline constexpr double kSyntheticBaseLevel = 3.0;
/// Standard deviation of the per-feature Gaussian noise.
inline constexpr double kSyntheticNoiseScale = 1.0;

/**
 * Draws `per_class` samples for each of `classes` classes in `dim` dimensions.
 *
 * Class k is centred at base + separation * u_k where u_k is a random unit
 * vector with nonnegative entries. Samples add N(0, 1) noise per feature and
 * are clipped at zero. Labels are "c0", "c1", ...; samples are class-major.
 */
inline Dataset generate_synthetic(std::size_t classes, std::size_t per_class, std::size_t dim, double separation,
                                  std::uint64_t seed) {
  if (classes < 1 || per_class < 1 || dim < 1) {
    throw ConfigError("generate_synthetic: classes, per_class and dim must all be at least 1");
  }
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw ConfigError("generate_synthetic: separation must be finite and nonnegative");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, kSyntheticNoiseScale);

  std::vector<Eigen::VectorXd> centers;
  for (std::size_t k = 0; k < classes; ++k) {
    Eigen::VectorXd dir(static_cast<Eigen::Index>(dim));
    for (Eigen::Index f = 0; f < dir.size(); ++f) dir(f) = unit(rng);
    if (dir.norm() > 0.0) dir.normalize();
    centers.push_back(Eigen::VectorXd::Constant(dir.size(), kSyntheticBaseLevel) + separation * dir);
  }

  const std::size_t n = classes * per_class;
  RowMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
  std::vector<Label> labels;
  labels.reserve(n);
  for (std::size_t k = 0; k < classes; ++k) {
    for (std::size_t s = 0; s < per_class; ++s) {
      const auto col = static_cast<Eigen::Index>(k * per_class + s);
      for (Eigen::Index f = 0; f < m.rows(); ++f) m(f, col) = std::max(0.0, centers[k](f) + noise(rng));
      labels.push_back("c" + std::to_string(k));
    }
  }
  std::vector<std::string> names;
  for (std::size_t f = 0; f < dim; ++f) names.push_back("f" + std::to_string(f + 1));
  return {DataMatrix(std::move(m)), LabelVector(std::move(labels)), std::move(names), {}};
}

/// Sample indices (ascending) of a stratified train/test split.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/**
 * Per class, shuffles that class's sample indices with a generator seeded by
 * `split_seed` and sends round(test_fraction * count) of them (at least one,
 * leaving at least one) to the test side.
 */
inline SplitIndices stratified_split(const LabelVector& labels, double test_fraction, std::uint64_t split_seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie strictly between 0 and 1");
  }
  std::map<Label, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  std::mt19937_64 rng(split_seed);
  SplitIndices out;
  for (auto& [label, idx] : by_class) {
    if (idx.size() < 2) {
      throw ConfigError("class '" + label + "' has " + std::to_string(idx.size()) +
                        " sample(s); a stratified split needs at least 2");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(idx.size())));
    n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    out.test.insert(out.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

/// Columns `idx` of `data`, with labels and ids carried along.
inline Dataset select_samples(const Dataset& data, const std::vector<std::size_t>& idx) {
  if (idx.empty()) throw InputError("select_samples: empty selection");
  RowMatrix m(static_cast<Eigen::Index>(data.matrix.rows()), static_cast<Eigen::Index>(idx.size()));
  std::vector<Label> labels;
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= data.matrix.cols()) throw IndexError("select_samples: index out of range");
    m.col(static_cast<Eigen::Index>(k)) = data.matrix.values().col(static_cast<Eigen::Index>(idx[k]));
    labels.push_back(data.labels[idx[k]]);
    if (data.sample_ids.size() == data.matrix.cols()) ids.push_back(data.sample_ids[idx[k]]);
  }
  return {DataMatrix(std::move(m)), LabelVector(std::move(labels)), data.feature_names, std::move(ids)};
}

}  // namespace mmdnmf
