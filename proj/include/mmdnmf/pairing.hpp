#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mmdnmf/errors.hpp"
#include "mmdnmf/matrix.hpp"
#include "mmdnmf/multiplier_lp.hpp"

namespace mmdnmf {

using Label = std::string;

/// One class label per sample (per data-matrix column).
class LabelVector {
 public:
  LabelVector() = default;
  explicit LabelVector(std::vector<Label> labels) : labels_(std::move(labels)) {}
  LabelVector(std::initializer_list<Label> labels) : labels_(labels) {}

  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] bool empty() const noexcept { return labels_.empty(); }
  [[nodiscard]] const Label& operator[](std::size_t i) const { return labels_[i]; }
  [[nodiscard]] const std::vector<Label>& values() const noexcept { return labels_; }
  [[nodiscard]] auto begin() const noexcept { return labels_.begin(); }
  [[nodiscard]] auto end() const noexcept { return labels_.end(); }

  /// Distinct labels in ascending order.
  [[nodiscard]] std::vector<Label> classes() const {
    std::set<Label> s(labels_.begin(), labels_.end());
    return {s.begin(), s.end()};
  }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<Label> labels_;
};

/// Unordered sample pair, always stored with first < second.
struct SamplePair {
  std::size_t first;
  std::size_t second;

  friend bool operator==(const SamplePair&, const SamplePair&) = default;
};

/// Partition of all unordered sample pairs into same-class and different-class pairs.
struct PairSets {
  std::vector<SamplePair> within;
  std::vector<SamplePair> between;
  std::size_t sample_count = 0;
};

/// Splits every pair (i, j), i < j, by whether labels[i] == labels[j].
/// Pairs are emitted in lexicographic (i, j) order.
inline PairSets build_pair_sets(const LabelVector& labels) {
  if (labels.empty()) throw InputError("build_pair_sets: label vector is empty");
  PairSets out;
  out.sample_count = labels.size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      (labels[i] == labels[j] ? out.within : out.between).push_back({i, j});
    }
  }
  return out;
}

/// Squared coefficient-space distance for every pair in `pairs`, in order.
inline std::vector<double> pair_distances(const DataMatrix& coeffs, const std::vector<SamplePair>& pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(pairwise_sq_distance(coeffs, p.first, p.second));
  return out;
}

/**
 * Pair weights expanded to n x n form.
 *
 * within_weights (Lambda) and between_weights (Xi) are symmetric with zero
 * outside their pair set; within_degrees (D) and between_degrees (E) are the
 * diagonals of the matching row-sum matrices, so that D - Lambda and E - Xi
 * are graph Laplacians.
 */
struct WeightMatrices {
  Eigen::MatrixXd within_weights;
  Eigen::MatrixXd between_weights;
  Eigen::VectorXd within_degrees;
  Eigen::VectorXd between_degrees;

  static WeightMatrices zeros(std::size_t n) {
    const auto sn = static_cast<Eigen::Index>(n);
    return {Eigen::MatrixXd::Zero(sn, sn), Eigen::MatrixXd::Zero(sn, sn), Eigen::VectorXd::Zero(sn),
            Eigen::VectorXd::Zero(sn)};
  }

  [[nodiscard]] std::size_t sample_count() const noexcept {
    return static_cast<std::size_t>(within_weights.rows());
  }
  [[nodiscard]] Eigen::MatrixXd within_laplacian() const {
    return Eigen::MatrixXd(within_degrees.asDiagonal()) - within_weights;
  }
  [[nodiscard]] Eigen::MatrixXd between_laplacian() const {
    return Eigen::MatrixXd(between_degrees.asDiagonal()) - between_weights;
  }
};

/// Expands per-pair multipliers into Lambda, Xi and their degree diagonals.
inline WeightMatrices assemble_weights(const PairSets& pairs, const MultiplierState& multipliers) {
  if (multipliers.lambda.size() != pairs.within.size() || multipliers.xi.size() != pairs.between.size()) {
    throw InputError("assemble_weights: expected " + std::to_string(pairs.within.size()) + " lambda and " +
                     std::to_string(pairs.between.size()) + " xi values, got " +
                     std::to_string(multipliers.lambda.size()) + " and " + std::to_string(multipliers.xi.size()));
  }
  auto w = WeightMatrices::zeros(pairs.sample_count);
  auto scatter = [](Eigen::MatrixXd& m, const std::vector<SamplePair>& ps, const std::vector<double>& vals) {
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (vals[k] < 0.0) throw InputError("assemble_weights: negative multiplier");
      const auto i = static_cast<Eigen::Index>(ps[k].first);
      const auto j = static_cast<Eigen::Index>(ps[k].second);
      m(i, j) = vals[k];
      m(j, i) = vals[k];
    }
  };
  scatter(w.within_weights, pairs.within, multipliers.lambda);
  scatter(w.between_weights, pairs.between, multipliers.xi);
  w.within_degrees = w.within_weights.rowwise().sum();
  w.between_degrees = w.between_weights.rowwise().sum();
  return w;
}

}  // namespace mmdnmf
