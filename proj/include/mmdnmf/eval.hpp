#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mmdnmf/errors.hpp"
#include "mmdnmf/matrix.hpp"
#include "mmdnmf/pairing.hpp"

namespace mmdnmf {

struct MarginStats {
  double max_within = 0.0;
  double min_between = 0.0;
};

struct EvalResult {
  double knn_accuracy = 0.0;
  double max_within_dist = 0.0;
  double min_between_dist = 0.0;
  double reconstruction_error = 0.0;

  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

/// Largest within-class and smallest between-class squared distance among
/// the columns of `coeffs`. An empty within set yields max_within = 0.
inline MarginStats margin_stats(const DataMatrix& coeffs, const PairSets& pairs) {
  if (pairs.sample_count != coeffs.cols()) {
    throw DimensionError("margin_stats: pairs cover " + std::to_string(pairs.sample_count) + " samples, matrix has " +
                         std::to_string(coeffs.cols()) + " columns");
  }
  if (pairs.between.empty()) throw EvaluationError("margin_stats: no between-class pairs");
  MarginStats out;
  for (const auto& p : pairs.within) {
    out.max_within = std::max(out.max_within, pairwise_sq_distance(coeffs, p.first, p.second));
  }
  out.min_between = pairwise_sq_distance(coeffs, pairs.between.front().first, pairs.between.front().second);
  for (const auto& p : pairs.between) {
    out.min_between = std::min(out.min_between, pairwise_sq_distance(coeffs, p.first, p.second));
  }
  return out;
}

/**
 * Fraction of test columns whose k-nearest-neighbour vote among the training
 * columns returns the true label.
 *
 * Distances are squared Euclidean. Equal distances are ordered by training
 * index; a tied vote goes to the smallest label.
 */
inline double knn_accuracy(const DataMatrix& train, const LabelVector& train_labels, const DataMatrix& test,
                           const LabelVector& test_labels, std::size_t k = 1) {
  if (train.cols() != train_labels.size() || test.cols() != test_labels.size()) {
    throw DimensionError("knn_accuracy: column and label counts differ");
  }
  if (train.rows() != test.rows()) throw DimensionError("knn_accuracy: train and test feature dimensions differ");
  if (k < 1 || k > train.cols()) {
    throw ConfigError("knn_accuracy: k must lie in [1, " + std::to_string(train.cols()) + "], got " +
                      std::to_string(k));
  }
  const auto& tr = train.values();
  const auto& te = test.values();

  std::size_t correct = 0;
  std::vector<std::pair<double, std::size_t>> order(train.cols());
  for (Eigen::Index t = 0; t < te.cols(); ++t) {
    for (std::size_t i = 0; i < train.cols(); ++i) {
      order[i] = {(tr.col(static_cast<Eigen::Index>(i)) - te.col(t)).squaredNorm(), i};
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());

    std::map<Label, std::size_t> votes;
    for (std::size_t r = 0; r < k; ++r) ++votes[train_labels[order[r].second]];
    // std::map iterates labels in ascending order, so strict > keeps the smallest on ties.
    const Label* winner = nullptr;
    std::size_t best = 0;
    for (const auto& [label, count] : votes) {
      if (count > best) {
        best = count;
        winner = &label;
      }
    }
    if (*winner == test_labels[static_cast<std::size_t>(t)]) ++correct;
  }
  return test.cols() == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.cols());
}

}  // namespace mmdnmf
