#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>

#include "mmdnmf/errors.hpp"

namespace mmdnmf {

/// Dense row-major storage shared by every matrix in the library.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Additive constant applied to every multiplicative-update denominator.
inline constexpr double kDefaultGuard = 1e-12;

/**
 * A dense matrix with every entry finite and nonnegative and at least one
 * row and one column.
 *
 * The invariant is checked once at construction; the only way to obtain a
 * modified matrix is through the update kernels below, which return new
 * values.
 */
class DataMatrix {
 public:
  explicit DataMatrix(RowMatrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
      throw DimensionError("DataMatrix must have at least one row and one column, got " +
                           std::to_string(values_.rows()) + "x" + std::to_string(values_.cols()));
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      for (Eigen::Index j = 0; j < values_.cols(); ++j) {
        const double v = values_(i, j);
        if (!std::isfinite(v) || v < 0.0) {
          throw InputError("DataMatrix entry (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") is negative or not finite");
        }
      }
    }
  }

  /// Row-by-row literal, e.g. `DataMatrix::from_rows({{1, 2}, {3, 4}})`.
  static DataMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = n_rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.begin()->size());
    RowMatrix m(n_rows, n_cols);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != n_cols) {
        throw DimensionError("ragged row literal");
      }
      Eigen::Index j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    return DataMatrix(std::move(m));
  }

  static DataMatrix zeros(std::size_t rows, std::size_t cols) {
    return DataMatrix(RowMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)));
  }

  [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  [[nodiscard]] std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  [[nodiscard]] const RowMatrix& values() const noexcept { return values_; }

  friend bool operator==(const DataMatrix& a, const DataMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  RowMatrix values_;
};

/// Nonnegative factorization X ~ basis * coeffs with basis d x m and coeffs m x n.
class Factorization {
 public:
  Factorization(DataMatrix basis, DataMatrix coeffs) : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (basis_.cols() != coeffs_.rows()) {
      throw DimensionError("basis has " + std::to_string(basis_.cols()) + " columns but coeffs has " +
                           std::to_string(coeffs_.rows()) + " rows");
    }
    if (rank() > std::min(basis_.rows(), coeffs_.cols())) {
      throw ConfigError("rank " + std::to_string(rank()) + " exceeds min(d, n) = " +
                        std::to_string(std::min(basis_.rows(), coeffs_.cols())));
    }
  }

  [[nodiscard]] const DataMatrix& basis() const noexcept { return basis_; }
  [[nodiscard]] const DataMatrix& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] std::size_t rank() const noexcept { return basis_.cols(); }
  [[nodiscard]] RowMatrix product() const { return basis_.values() * coeffs_.values(); }

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  DataMatrix basis_;
  DataMatrix coeffs_;
};

namespace detail {

inline void require_same_shape(const RowMatrix& a, const RowMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

inline double frobenius_sq(const RowMatrix& a, const RowMatrix& b) {
  require_same_shape(a, b, "frobenius_sq");
  return (a - b).squaredNorm();
}

// target .* numer ./ (denom + guard), with a clamp so rounding never yields -0 or worse.
inline RowMatrix ratio_update(const RowMatrix& target, const RowMatrix& numer, const RowMatrix& denom,
                              double guard) {
  require_same_shape(target, numer, "ratio_update");
  require_same_shape(target, denom, "ratio_update");
  if (!(guard > 0.0) || !std::isfinite(guard)) {
    throw ConfigError("ratio_update guard must be a positive finite number");
  }
  RowMatrix out = target.array() * numer.array() / (denom.array() + guard);
  return out.cwiseMax(0.0);
}

}  // namespace detail

/// Squared Frobenius distance sum_ij (A_ij - B_ij)^2.
inline double frobenius_sq(const DataMatrix& a, const DataMatrix& b) {
  return detail::frobenius_sq(a.values(), b.values());
}

/// Elementwise target * numer / (denom + guard), the kernel behind every
/// multiplicative update. Nonnegative inputs give a nonnegative output.
inline DataMatrix ratio_update(const DataMatrix& target, const DataMatrix& numer, const DataMatrix& denom,
                               double guard) {
  return DataMatrix(detail::ratio_update(target.values(), numer.values(), denom.values(), guard));
}

/// ||v_i - v_j||^2 between columns i and j.
inline double pairwise_sq_distance(const DataMatrix& v, std::size_t i, std::size_t j) {
  if (i >= v.cols() || j >= v.cols()) {
    throw IndexError("column index (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") out of range for " + std::to_string(v.cols()) + " columns");
  }
  const auto& m = v.values();
  return (m.col(static_cast<Eigen::Index>(i)) - m.col(static_cast<Eigen::Index>(j))).squaredNorm();
}

}  // namespace mmdnmf
