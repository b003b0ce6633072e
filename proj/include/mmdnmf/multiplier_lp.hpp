#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mmdnmf/errors.hpp"

namespace mmdnmf {

/// Dual multipliers on the per-pair distance constraints together with the two
/// slack scalars they are paired with.
///
/// `lambda` is indexed like PairSets::within, `xi` like PairSets::between.
/// epsilon bounds the largest within-class distance, zeta the smallest
/// between-class distance.
struct MultiplierState {
  std::vector<double> lambda;
  std::vector<double> xi;
  double epsilon = 0.0;
  double zeta = 0.0;

  [[nodiscard]] double lambda_mass() const { return std::accumulate(lambda.begin(), lambda.end(), 0.0); }
  [[nodiscard]] double xi_mass() const { return std::accumulate(xi.begin(), xi.end(), 0.0); }

  friend bool operator==(const MultiplierState&, const MultiplierState&) = default;
};

/// Value of sum_p lambda_p (d_p - epsilon) - sum_q xi_q (d_q - zeta).
inline double multiplier_lp_objective(std::span<const double> within_dists, std::span<const double> between_dists,
                                      double epsilon, double zeta, const MultiplierState& state) {
  if (state.lambda.size() != within_dists.size() || state.xi.size() != between_dists.size()) {
    throw InputError("multiplier vector lengths do not match distance lists");
  }
  double value = 0.0;
  for (std::size_t p = 0; p < within_dists.size(); ++p) value += state.lambda[p] * (within_dists[p] - epsilon);
  for (std::size_t q = 0; q < between_dists.size(); ++q) value -= state.xi[q] * (between_dists[q] - zeta);
  return value;
}

namespace detail {

inline void check_lp_parameters(std::span<const double> between_dists, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError("trade-off parameters a and b must be positive and finite (a=" + std::to_string(a) +
                      ", b=" + std::to_string(b) + ")");
  }
  if (between_dists.empty()) {
    throw InfeasibleError("no between-class pairs: the constraint sum(xi) >= b cannot be met");
  }
}

}  // namespace detail

/**
 * Solves the multiplier subproblem
 *
 *     max  sum_p lambda_p (d_p - epsilon) - sum_q xi_q (d_q - zeta)
 *     s.t. lambda >= 0, sum lambda <= a,  xi >= 0, sum xi >= b
 *
 * in closed form. The lambda block lives on a scaled simplex, so its optimum
 * is either zero or mass `a` on the first pair with the largest positive
 * coefficient. The xi block is taken on the face sum xi = b (the problem is
 * unbounded above when some d_q < zeta), where the optimum is mass `b` on the
 * first pair with the smallest d_q - zeta.
 *
 * The returned state carries the given epsilon and zeta unchanged.
 */
inline MultiplierState solve_multiplier_lp(std::span<const double> within_dists,
                                           std::span<const double> between_dists, double epsilon, double zeta,
                                           double a, double b) {
  detail::check_lp_parameters(between_dists, a, b);

  MultiplierState out;
  out.epsilon = epsilon;
  out.zeta = zeta;
  out.lambda.assign(within_dists.size(), 0.0);
  out.xi.assign(between_dists.size(), 0.0);

  if (!within_dists.empty()) {
    std::size_t best = 0;
    for (std::size_t p = 1; p < within_dists.size(); ++p) {
      if (within_dists[p] - epsilon > within_dists[best] - epsilon) best = p;
    }
    if (within_dists[best] - epsilon > 0.0) out.lambda[best] = a;
  }

  std::size_t best = 0;
  for (std::size_t q = 1; q < between_dists.size(); ++q) {
    if (between_dists[q] - zeta < between_dists[best] - zeta) best = q;
  }
  out.xi[best] = b;
  return out;
}

/// Largest instance brute_force_lp_oracle accepts, per distance list.
inline constexpr std::size_t kOracleMaxPairs = 12;

/**
 * Reference solver for the multiplier LP by vertex enumeration.
 *
 * Candidate lambda vertices are the origin and a * e_p for every within pair;
 * candidate xi vertices are b * e_q for every between pair. Each (lambda, xi)
 * combination is scored with multiplier_lp_objective and the first maximizer
 * in enumeration order wins. Intended as a test oracle only.
 */
inline MultiplierState brute_force_lp_oracle(std::span<const double> within_dists,
                                             std::span<const double> between_dists, double epsilon, double zeta,
                                             double a, double b) {
  detail::check_lp_parameters(between_dists, a, b);
  if (within_dists.size() > kOracleMaxPairs || between_dists.size() > kOracleMaxPairs) {
    throw ScaleError("brute_force_lp_oracle handles at most " + std::to_string(kOracleMaxPairs) +
                     " pairs per list");
  }

  std::vector<std::vector<double>> lambda_vertices;
  lambda_vertices.emplace_back(within_dists.size(), 0.0);
  for (std::size_t p = 0; p < within_dists.size(); ++p) {
    std::vector<double> v(within_dists.size(), 0.0);
    v[p] = a;
    lambda_vertices.push_back(std::move(v));
  }
  std::vector<std::vector<double>> xi_vertices;
  for (std::size_t q = 0; q < between_dists.size(); ++q) {
    std::vector<double> v(between_dists.size(), 0.0);
    v[q] = b;
    xi_vertices.push_back(std::move(v));
  }

  MultiplierState best;
  bool have_best = false;
  double best_value = 0.0;
  for (const auto& lambda : lambda_vertices) {
    for (const auto& xi : xi_vertices) {
      MultiplierState candidate{lambda, xi, epsilon, zeta};
      const double value = multiplier_lp_objective(within_dists, between_dists, epsilon, zeta, candidate);
      if (!have_best || value > best_value) {
        best = std::move(candidate);
        best_value = value;
        have_best = true;
      }
    }
  }
  return best;
}

}  // namespace mmdnmf
