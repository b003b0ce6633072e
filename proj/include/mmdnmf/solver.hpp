#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmdnmf/errors.hpp"
#include "mmdnmf/matrix.hpp"
#include "mmdnmf/multiplier_lp.hpp"
#include "mmdnmf/pairing.hpp"

namespace mmdnmf {

/// How the slack scalars are refreshed after each U/V step.
enum class SlackMode {
  /// epsilon <- (sum lambda / a) epsilon,  zeta <- (b / sum xi) zeta.
  paper,
  /// epsilon <- max within-class distance, zeta <- min between-class distance.
  direct,
};

inline std::string_view to_string(SlackMode mode) { return mode == SlackMode::paper ? "paper" : "direct"; }

inline SlackMode parse_slack_mode(std::string_view text) {
  if (text == "paper") return SlackMode::paper;
  if (text == "direct") return SlackMode::direct;
  throw ConfigError("unknown slack mode '" + std::string(text) + "' (expected paper or direct)");
}

struct SolverConfig {
  std::size_t rank = 2;
  double a = 1.0;
  double b = 1.0;
  std::size_t max_iter = 500;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  SlackMode slack_mode = SlackMode::direct;
  double guard = kDefaultGuard;

  /// Throws ConfigError unless the configuration is usable for a d x n matrix.
  void validate(std::size_t d, std::size_t n) const {
    if (rank < 1 || rank > std::min(d, n)) {
      throw ConfigError("rank must lie in [1, " + std::to_string(std::min(d, n)) + "], got " +
                        std::to_string(rank));
    }
    if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("a must be positive");
    if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("b must be positive");
    if (!(guard > 0.0) || !std::isfinite(guard)) throw ConfigError("guard must be positive");
  }

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// State after one outer iteration. Baseline fits leave the slack and margin
/// fields at zero and set objective equal to reconstruction_error.
struct IterationRecord {
  double reconstruction_error = 0.0;
  double epsilon = 0.0;
  double zeta = 0.0;
  double objective = 0.0;
  double max_within_dist = 0.0;
  double min_between_dist = 0.0;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct FitReport {
  std::vector<IterationRecord> iterations;
  bool converged = false;
  Factorization final_factorization;

  friend bool operator==(const FitReport&, const FitReport&) = default;
};

/// Uniform draws from (0.01, 1.01] for U then V, row-major, from one mt19937_64 stream.
inline Factorization init_factorization(const DataMatrix& x, std::size_t rank, std::uint64_t seed) {
  if (rank < 1 || rank > std::min(x.rows(), x.cols())) {
    throw ConfigError("rank must lie in [1, " + std::to_string(std::min(x.rows(), x.cols())) + "], got " +
                      std::to_string(rank));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto fill = [&](std::size_t r, std::size_t c) {
    RowMatrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = 1.01 - unit(rng);
    return DataMatrix(std::move(m));
  };
  auto basis = fill(x.rows(), rank);
  auto coeffs = fill(rank, x.cols());
  return {std::move(basis), std::move(coeffs)};
}

namespace detail {

inline void check_factorization_shape(const DataMatrix& x, const Factorization& f) {
  if (f.basis().rows() != x.rows() || f.coeffs().cols() != x.cols()) {
    throw DimensionError("factorization shape (" + std::to_string(f.basis().rows()) + "x" +
                         std::to_string(f.rank()) + ")(" + std::to_string(f.rank()) + "x" +
                         std::to_string(f.coeffs().cols()) + ") does not match data " +
                         std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  }
}

}  // namespace detail

/// U <- U .* (X V^T) ./ (U V V^T + guard). V is untouched.
inline Factorization update_U(const DataMatrix& x, const Factorization& f, double guard = kDefaultGuard) {
  detail::check_factorization_shape(x, f);
  const auto& u = f.basis().values();
  const auto& v = f.coeffs().values();
  const RowMatrix vt = v.transpose();
  const RowMatrix numer = x.values() * vt;
  const RowMatrix denom = u * (v * vt);
  return {DataMatrix(detail::ratio_update(u, numer, denom, guard)), f.coeffs()};
}

/// V <- V .* (U^T X + V Lambda + V E) ./ (U^T U V + V D + V Xi + guard). U is untouched.
inline Factorization update_V(const DataMatrix& x, const Factorization& f, const WeightMatrices& w,
                              double guard = kDefaultGuard) {
  detail::check_factorization_shape(x, f);
  if (w.sample_count() != x.cols()) {
    throw DimensionError("weight matrices built for " + std::to_string(w.sample_count()) + " samples, data has " +
                         std::to_string(x.cols()));
  }
  const auto& u = f.basis().values();
  const auto& v = f.coeffs().values();
  const RowMatrix ut = u.transpose();
  RowMatrix numer = ut * x.values() + v * w.within_weights;
  numer += v * w.between_degrees.asDiagonal();
  RowMatrix denom = (ut * u) * v + v * w.between_weights;
  denom += v * w.within_degrees.asDiagonal();
  return {f.basis(), DataMatrix(detail::ratio_update(v, numer, denom, guard))};
}

/// Unweighted V step, identical to update_V with all-zero weights.
inline Factorization update_V(const DataMatrix& x, const Factorization& f, double guard = kDefaultGuard) {
  detail::check_factorization_shape(x, f);
  const auto& u = f.basis().values();
  const auto& v = f.coeffs().values();
  const RowMatrix ut = u.transpose();
  const RowMatrix numer = ut * x.values();
  const RowMatrix denom = (ut * u) * v;
  return {f.basis(), DataMatrix(detail::ratio_update(v, numer, denom, guard))};
}

/**
 * Refreshes epsilon and zeta in `state`.
 *
 * paper mode scales them by the multiplier masses and needs sum(xi) > 0.
 * direct mode sets them to the largest within distance and the smallest
 * between distance; an empty within list leaves epsilon at 0.
 */
inline MultiplierState update_slacks(MultiplierState state, double a, double b, SlackMode mode,
                                     std::span<const double> within_dists, std::span<const double> between_dists) {
  if (mode == SlackMode::paper) {
    const double xi_mass = state.xi_mass();
    if (!(xi_mass > 0.0)) throw DegenerateMultiplierError("update_slacks: sum of xi is zero in paper mode");
    state.epsilon = (state.lambda_mass() / a) * state.epsilon;
    state.zeta = (b / xi_mass) * state.zeta;
    return state;
  }
  if (between_dists.empty()) throw InfeasibleError("update_slacks: no between-class distances");
  state.epsilon = within_dists.empty() ? 0.0 : *std::max_element(within_dists.begin(), within_dists.end());
  state.zeta = *std::min_element(between_dists.begin(), between_dists.end());
  return state;
}

inline double reconstruction_error(const DataMatrix& x, const Factorization& f) {
  detail::check_factorization_shape(x, f);
  return detail::frobenius_sq(x.values(), f.product());
}

/// ||X - UV||^2 + a * epsilon - b * zeta.
inline double objective(const DataMatrix& x, const Factorization& f, double epsilon, double zeta, double a,
                        double b) {
  return reconstruction_error(x, f) + a * epsilon - b * zeta;
}

/// Rescales each nonzero basis column to unit Euclidean norm and the matching
/// coefficient row by the inverse factor. The product UV is unchanged up to rounding.
inline Factorization normalize_basis(const Factorization& f) {
  RowMatrix u = f.basis().values();
  RowMatrix v = f.coeffs().values();
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    const double norm = u.col(k).norm();
    if (norm > 0.0) {
      u.col(k) /= norm;
      v.row(k) *= norm;
    }
  }
  return {DataMatrix(std::move(u)), DataMatrix(std::move(v))};
}

namespace detail {

inline bool relative_change_below(double previous, double current, double tol) {
  const double scale = std::max(std::abs(previous), std::numeric_limits<double>::min());
  return std::abs(previous - current) / scale < tol;
}

inline double max_or_zero(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

inline double min_or_zero(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

}  // namespace detail

/// Plain Euclidean NMF by alternating multiplicative U and V steps.
inline FitReport fit_baseline(const DataMatrix& x, const SolverConfig& config) {
  config.validate(x.rows(), x.cols());
  auto f = init_factorization(x, config.rank, config.seed);
  double previous = reconstruction_error(x, f);

  std::vector<IterationRecord> records;
  records.reserve(config.max_iter);
  bool converged = false;
  for (std::size_t it = 0; it < config.max_iter; ++it) {
    f = update_U(x, f, config.guard);
    f = update_V(x, f, config.guard);
    const double err = reconstruction_error(x, f);
    records.push_back({.reconstruction_error = err, .objective = err});
    if (detail::relative_change_below(previous, err, config.tol)) {
      converged = true;
      break;
    }
    previous = err;
  }
  return {std::move(records), converged, normalize_basis(f)};
}

/**
 * Supervised factorization that pulls same-class coefficient vectors together
 * and pushes different-class ones apart.
 *
 * Each outer iteration:
 *   1. pair distances over the within and between sets from the current V,
 *   2. multipliers from solve_multiplier_lp at the current epsilon and zeta,
 *   3. Lambda, Xi, D, E from assemble_weights,
 *   4. update_U then the weighted update_V,
 *   5. update_slacks with the step-1 distances.
 * The record stores the margins of the updated V. The loop ends when the
 * relative objective change drops below tol or after max_iter iterations.
 */
inline FitReport fit_mmdnmf(const DataMatrix& x, const LabelVector& labels, const SolverConfig& config) {
  if (labels.size() != x.cols()) {
    throw DimensionError("label count " + std::to_string(labels.size()) + " does not match sample count " +
                         std::to_string(x.cols()));
  }
  config.validate(x.rows(), x.cols());
  const PairSets pairs = build_pair_sets(labels);
  if (pairs.between.empty()) {
    throw InfeasibleError("fit_mmdnmf needs at least two distinct classes");
  }

  auto f = init_factorization(x, config.rank, config.seed);
  auto within = pair_distances(f.coeffs(), pairs.within);
  auto between = pair_distances(f.coeffs(), pairs.between);

  MultiplierState state;
  state.epsilon = detail::max_or_zero(within);
  state.zeta = detail::min_or_zero(between);
  state.lambda.assign(pairs.within.size(), pairs.within.empty() ? 0.0 : config.a / pairs.within.size());
  state.xi.assign(pairs.between.size(), config.b / pairs.between.size());

  double previous = objective(x, f, state.epsilon, state.zeta, config.a, config.b);
  std::vector<IterationRecord> records;
  records.reserve(config.max_iter);
  bool converged = false;
  for (std::size_t it = 0; it < config.max_iter; ++it) {
    if (it > 0) {
      within = pair_distances(f.coeffs(), pairs.within);
      between = pair_distances(f.coeffs(), pairs.between);
    }
    auto solved = solve_multiplier_lp(within, between, state.epsilon, state.zeta, config.a, config.b);
    state.lambda = std::move(solved.lambda);
    state.xi = std::move(solved.xi);

    const auto weights = assemble_weights(pairs, state);
    f = update_U(x, f, config.guard);
    f = update_V(x, f, weights, config.guard);
    state = update_slacks(std::move(state), config.a, config.b, config.slack_mode, within, between);

    const double err = reconstruction_error(x, f);
    const double obj = err + config.a * state.epsilon - config.b * state.zeta;
    records.push_back({
        .reconstruction_error = err,
        .epsilon = state.epsilon,
        .zeta = state.zeta,
        .objective = obj,
        .max_within_dist = detail::max_or_zero(pair_distances(f.coeffs(), pairs.within)),
        .min_between_dist = detail::min_or_zero(pair_distances(f.coeffs(), pairs.between)),
    });
    if (detail::relative_change_below(previous, obj, config.tol)) {
      converged = true;
      break;
    }
    previous = obj;
  }
  return {std::move(records), converged, normalize_basis(f)};
}

/// Encodes a new sample against a fixed basis by multiplicative NNLS steps
/// v <- v .* (U^T x) ./ (U^T U v + guard), starting from v = 1.
inline Eigen::VectorXd project(const DataMatrix& basis, const Eigen::VectorXd& x_new, std::size_t iters,
                               double guard = kDefaultGuard) {
  if (static_cast<std::size_t>(x_new.size()) != basis.rows()) {
    throw DimensionError("project: sample has length " + std::to_string(x_new.size()) + ", basis has " +
                         std::to_string(basis.rows()) + " rows");
  }
  if (!(guard > 0.0)) throw ConfigError("project: guard must be positive");
  if ((x_new.array() < 0.0).any() || !x_new.allFinite()) {
    throw InputError("project: sample must be finite and nonnegative");
  }
  const auto& u = basis.values();
  const Eigen::VectorXd utx = u.transpose() * x_new;
  const Eigen::MatrixXd gram = u.transpose() * u;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(u.cols());
  for (std::size_t it = 0; it < iters; ++it) {
    const Eigen::VectorXd denom = gram * v;
    v = (v.array() * utx.array() / (denom.array() + guard)).cwiseMax(0.0).matrix();
  }
  return v;
}

/// project() applied to every column of `samples`; returns the m x n coefficient matrix.
inline DataMatrix project_columns(const DataMatrix& basis, const DataMatrix& samples, std::size_t iters,
                                  double guard = kDefaultGuard) {
  RowMatrix out(static_cast<Eigen::Index>(basis.cols()), static_cast<Eigen::Index>(samples.cols()));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    out.col(j) = project(basis, samples.values().col(j), iters, guard);
  }
  return DataMatrix(std::move(out));
}

}  // namespace mmdnmf
