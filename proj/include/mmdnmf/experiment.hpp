#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "mmdnmf/dataset.hpp"
#include "mmdnmf/eval.hpp"
#include "mmdnmf/pairing.hpp"
#include "mmdnmf/solver.hpp"
#include "mmdnmf/version.hpp"

namespace mmdnmf {

/// Multiplicative steps used to encode held-out samples.
inline constexpr std::size_t kDefaultProjectionIters = 500;

/// Fit outcome of one method inside a RunReport.
struct MethodSummary {
  std::string method;
  std::size_t iterations_run = 0;
  bool converged = false;
  std::vector<IterationRecord> trace;
  EvalResult eval;

  friend bool operator==(const MethodSummary&, const MethodSummary&) = default;
};

struct RunReport {
  SolverConfig config;
  double test_fraction = 0.0;
  std::uint64_t split_seed = 0;
  std::size_t projection_iters = kDefaultProjectionIters;
  std::size_t knn_k = 1;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  MethodSummary baseline;
  MethodSummary mmdnmf;
  double wall_clock_seconds = 0.0;
  std::string version = std::string(kVersion);

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/**
 * Scores a fitted model: k-NN accuracy of projected test samples against the
 * training coefficients, margins of the training coefficients, and the
 * training reconstruction error.
 */
inline EvalResult evaluate_fit(const Dataset& train, const Dataset& test, const FitReport& fit,
                               std::size_t projection_iters, std::size_t k, double guard = kDefaultGuard) {
  const auto& f = fit.final_factorization;
  const auto test_coeffs = project_columns(f.basis(), test.matrix, projection_iters, guard);
  const auto margins = margin_stats(f.coeffs(), build_pair_sets(train.labels));
  EvalResult out;
  out.knn_accuracy = knn_accuracy(f.coeffs(), train.labels, test_coeffs, test.labels, k);
  out.max_within_dist = margins.max_within;
  out.min_between_dist = margins.min_between;
  out.reconstruction_error = reconstruction_error(train.matrix, f);
  return out;
}

inline MethodSummary summarize(std::string method, FitReport fit, const EvalResult& eval) {
  MethodSummary s;
  s.method = std::move(method);
  s.iterations_run = fit.iterations.size();
  s.converged = fit.converged;
  s.trace = std::move(fit.iterations);
  s.eval = eval;
  return s;
}

/**
 * Stratified split, baseline and supervised fits on the training side (run
 * concurrently), projection of the test side, and evaluation of both.
 */
inline RunReport run_experiment(const Dataset& dataset, const SolverConfig& config, double test_fraction,
                                std::uint64_t split_seed, std::size_t projection_iters = kDefaultProjectionIters,
                                std::size_t k = 1) {
  const auto start = std::chrono::steady_clock::now();
  const auto split = stratified_split(dataset.labels, test_fraction, split_seed);
  const Dataset train = select_samples(dataset, split.train);
  const Dataset test = select_samples(dataset, split.test);
  config.validate(train.matrix.rows(), train.matrix.cols());

  auto baseline_job = std::async(std::launch::async, [&] { return fit_baseline(train.matrix, config); });
  FitReport supervised = fit_mmdnmf(train.matrix, train.labels, config);
  FitReport baseline = baseline_job.get();

  RunReport report;
  report.config = config;
  report.test_fraction = test_fraction;
  report.split_seed = split_seed;
  report.projection_iters = projection_iters;
  report.knn_k = k;
  report.train_count = split.train.size();
  report.test_count = split.test.size();
  const auto baseline_eval = evaluate_fit(train, test, baseline, projection_iters, k, config.guard);
  const auto supervised_eval = evaluate_fit(train, test, supervised, projection_iters, k, config.guard);
  report.baseline = summarize("baseline", std::move(baseline), baseline_eval);
  report.mmdnmf = summarize("mmdnmf", std::move(supervised), supervised_eval);
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mmdnmf
