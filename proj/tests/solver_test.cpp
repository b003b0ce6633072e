#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "mmdnmf/dataset.hpp"
#include "mmdnmf/solver.hpp"
#include "test_util.hpp"

using namespace mmdnmf;

namespace {

using Vec = std::vector<double>;

SolverConfig config_with(std::size_t rank, std::size_t max_iter, double tol = 1e-300) {
  SolverConfig c;
  c.rank = rank;
  c.max_iter = max_iter;
  c.tol = tol;
  return c;
}

// Two clusters in [0, 1]^10: class A loads the first five features, class B the last five.
Dataset two_clusters(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.05);
  RowMatrix m(10, 40);
  std::vector<Label> labels;
  for (Eigen::Index s = 0; s < 40; ++s) {
    const bool first = s < 20;
    for (Eigen::Index f = 0; f < 10; ++f) {
      const double center = (f < 5) == first ? 0.8 : 0.1;
      m(f, s) = std::max(0.0, center + noise(rng));
    }
    labels.push_back(first ? "A" : "B");
  }
  return {DataMatrix(m), LabelVector(labels), {}, {}};
}

double max_of(const Vec& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST(InitFactorization, DeterministicPositiveAndSeedSensitive) {
  const auto x = DataMatrix::zeros(6, 9);
  const auto f1 = init_factorization(x, 3, 17);
  const auto f2 = init_factorization(x, 3, 17);
  EXPECT_EQ(f1, f2);
  EXPECT_GT(f1.basis().values().minCoeff(), 0.01);
  EXPECT_GT(f1.coeffs().values().minCoeff(), 0.01);
  EXPECT_LE(f1.basis().values().maxCoeff(), 1.01);
  EXPECT_FALSE(init_factorization(x, 3, 18) == f1);
}

TEST(InitFactorization, InvalidRank) {
  const auto x = DataMatrix::zeros(6, 4);
  EXPECT_THROW(init_factorization(x, 0, 1), ConfigError);
  EXPECT_THROW(init_factorization(x, 5, 1), ConfigError);
}

TEST(UpdateU, Examples) {
  const auto x = DataMatrix::from_rows({{1, 1}, {1, 1}});
  const Factorization exact(DataMatrix::from_rows({{1}, {1}}), DataMatrix::from_rows({{1, 1}}));
  const auto same = update_U(x, exact);
  EXPECT_NEAR(same.basis()(0, 0), 1.0, 1e-11);
  EXPECT_NEAR(same.basis()(1, 0), 1.0, 1e-11);
  EXPECT_EQ(same.coeffs(), exact.coeffs());

  const Factorization scalar(DataMatrix::from_rows({{1}}), DataMatrix::from_rows({{1}}));
  EXPECT_NEAR(update_U(DataMatrix::from_rows({{2}}), scalar).basis()(0, 0), 2.0, 1e-9);
}

TEST(UpdateU, ZeroEntriesStayZero) {
  std::mt19937_64 rng(1);
  const auto x = test_support::random_matrix(rng, 4, 6);
  RowMatrix u = test_support::random_matrix(rng, 4, 2).values();
  u(2, 1) = 0.0;
  Factorization f(DataMatrix(u), test_support::random_matrix(rng, 2, 6));
  for (int it = 0; it < 10; ++it) f = update_U(x, f);
  EXPECT_EQ(f.basis()(2, 1), 0.0);
}

TEST(UpdateU, ShapeMismatch) {
  const Factorization f(DataMatrix::zeros(3, 1), DataMatrix::zeros(1, 2));
  EXPECT_THROW(update_U(DataMatrix::zeros(2, 2), f), DimensionError);
}

TEST(UpdateV, ExactFactorizationWithZeroWeightsIsFixed) {
  std::mt19937_64 rng(4);
  const auto u = test_support::random_matrix(rng, 5, 2);
  const auto v = test_support::random_matrix(rng, 2, 6);
  const DataMatrix x(u.values() * v.values());
  const auto out = update_V(x, Factorization(u, v), WeightMatrices::zeros(6));
  EXPECT_LE((out.coeffs().values() - v.values()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(UpdateV, ScalarStep) {
  const Factorization f(DataMatrix::from_rows({{1}}), DataMatrix::from_rows({{1}}));
  EXPECT_NEAR(update_V(DataMatrix::from_rows({{2}}), f, WeightMatrices::zeros(1)).coeffs()(0, 0), 2.0, 1e-9);
}

TEST(UpdateV, WithinTermsCancelOnIdenticalColumns) {
  // With v1 = v2, V*Lambda = V*D, so the within-pair weight adds the same
  // amount to numerator and denominator.
  const auto x = DataMatrix::from_rows({{1.0, 3.0}, {2.0, 0.5}});
  const Factorization f(DataMatrix::from_rows({{1.0}, {0.5}}), DataMatrix::from_rows({{0.7, 0.7}}));
  const auto w = assemble_weights(build_pair_sets({"A", "A"}), MultiplierState{{1.0}, {}});
  const RowMatrix& v = f.coeffs().values();
  EXPECT_EQ(RowMatrix(v * w.within_weights), RowMatrix(v * w.within_degrees.asDiagonal()));

  const auto weighted = update_V(x, f, w);
  const auto& u = f.basis().values();
  const RowMatrix numer = u.transpose() * x.values() + v * w.within_weights;
  const RowMatrix denom =
      (u.transpose() * u * v + v * w.within_degrees.asDiagonal()).array() + kDefaultGuard;
  for (Eigen::Index j = 0; j < 2; ++j) {
    EXPECT_NEAR(weighted.coeffs()(0, j), v(0, j) * numer(0, j) / denom(0, j), 1e-12);
  }
}

TEST(UpdateV, WeightSizeMismatch) {
  const Factorization f(DataMatrix::zeros(2, 1), DataMatrix::zeros(1, 3));
  EXPECT_THROW(update_V(DataMatrix::zeros(2, 3), f, WeightMatrices::zeros(2)), DimensionError);
}

TEST(UpdateSlacks, PaperMode) {
  MultiplierState s{{1.0}, {1.0}, 4.0, 3.0};
  EXPECT_EQ(update_slacks(s, 1.0, 1.0, SlackMode::paper, {}, {}).epsilon, 4.0);
  s.lambda = {0.5};
  EXPECT_EQ(update_slacks(s, 1.0, 1.0, SlackMode::paper, {}, {}).epsilon, 2.0);
  s.xi = {0.5};
  EXPECT_EQ(update_slacks(s, 1.0, 1.0, SlackMode::paper, {}, {}).zeta, 6.0);
}

TEST(UpdateSlacks, PaperModeNeedsXiMass) {
  const MultiplierState s{{1.0}, {0.0}, 4.0, 3.0};
  EXPECT_THROW(update_slacks(s, 1.0, 1.0, SlackMode::paper, {}, {}), DegenerateMultiplierError);
}

TEST(UpdateSlacks, DirectMode) {
  const auto s = update_slacks({}, 1.0, 1.0, SlackMode::direct, Vec{1, 3}, Vec{2, 5});
  EXPECT_EQ(s.epsilon, 3.0);
  EXPECT_EQ(s.zeta, 2.0);
  EXPECT_EQ(update_slacks({}, 1.0, 1.0, SlackMode::direct, Vec{}, Vec{2}).epsilon, 0.0);
}

TEST(Objective, Examples) {
  const Factorization f(DataMatrix::from_rows({{1}, {2}}), DataMatrix::from_rows({{1, 3}}));
  const DataMatrix exact(f.product());
  EXPECT_EQ(objective(exact, f, 0.0, 0.0, 1.0, 1.0), 0.0);

  // ||X - UV||^2 = 5: off by 1 in one cell and 2 in another.
  RowMatrix off = f.product();
  off(0, 0) += 1.0;
  off(1, 1) += 2.0;
  EXPECT_DOUBLE_EQ(objective(DataMatrix(off), f, 2.0, 3.0, 1.0, 1.0), 4.0);
  EXPECT_LT(objective(exact, f, 0.0, 100.0, 1.0, 1.0), 0.0);
}

TEST(FitBaseline, FullRankDrivesErrorDown) {
  std::mt19937_64 rng(8);
  const auto x = test_support::random_matrix(rng, 5, 8);
  const auto cfg = config_with(5, 3000);
  const double initial = reconstruction_error(x, init_factorization(x, cfg.rank, cfg.seed));
  const auto report = fit_baseline(x, cfg);
  EXPECT_LT(report.iterations.back().reconstruction_error, 1e-3 * initial);
}

TEST(FitBaseline, RecoversRankOneMatrix) {
  std::mt19937_64 rng(12);
  const auto a = test_support::random_matrix(rng, 6, 1);
  const auto b = test_support::random_matrix(rng, 1, 9);
  const DataMatrix x(a.values() * b.values());
  const auto report = fit_baseline(x, config_with(1, 500));
  EXPECT_LT(report.iterations.back().reconstruction_error, 1e-6 * x.values().squaredNorm());
}

TEST(FitBaseline, MaxIterOneGivesOneRecord) {
  std::mt19937_64 rng(2);
  EXPECT_EQ(fit_baseline(test_support::random_matrix(rng, 4, 4), config_with(2, 1)).iterations.size(), 1u);
}

TEST(FitBaseline, MonotoneAndNonnegative) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    const auto x = test_support::random_matrix(rng, 7, 12);
    const auto report = fit_baseline(x, config_with(3, 200));
    for (std::size_t i = 1; i < report.iterations.size(); ++i) {
      EXPECT_LE(report.iterations[i].reconstruction_error, report.iterations[i - 1].reconstruction_error + 1e-9);
    }
    EXPECT_GE(report.final_factorization.basis().values().minCoeff(), 0.0);
    EXPECT_GE(report.final_factorization.coeffs().values().minCoeff(), 0.0);
  }
}

TEST(FitBaseline, StopsOnTolerance) {
  std::mt19937_64 rng(5);
  const auto report = fit_baseline(test_support::random_matrix(rng, 6, 10), config_with(2, 5000, 1e-4));
  EXPECT_TRUE(report.converged);
  EXPECT_LT(report.iterations.size(), 5000u);
}

TEST(FitBaseline, NormalizesBasisColumns) {
  std::mt19937_64 rng(6);
  const auto report = fit_baseline(test_support::random_matrix(rng, 6, 10), config_with(3, 50));
  const auto& u = report.final_factorization.basis().values();
  for (Eigen::Index k = 0; k < u.cols(); ++k) EXPECT_NEAR(u.col(k).norm(), 1.0, 1e-12);
}

TEST(FitBaseline, RejectsBadConfig) {
  const auto x = DataMatrix::zeros(3, 3);
  auto c = config_with(2, 10);
  c.tol = 0.0;
  EXPECT_THROW(fit_baseline(x, c), ConfigError);
  c = config_with(2, 0);
  EXPECT_THROW(fit_baseline(x, c), ConfigError);
  c = config_with(4, 10);
  EXPECT_THROW(fit_baseline(x, c), ConfigError);
}

TEST(FitMmdnmf, ShrinksWithinSpreadOnSeparatedClusters) {
  // Trade-offs must be small relative to the data scale: the between-class
  // reward grows with the scale of V, so large a, b let V run away while U shrinks.
  const auto data = two_clusters(3);
  auto cfg = config_with(2, 300);
  cfg.a = cfg.b = 0.01;
  const auto pairs = build_pair_sets(data.labels);
  const auto init = init_factorization(data.matrix, cfg.rank, cfg.seed);
  const double initial_max_within = max_of(pair_distances(init.coeffs(), pairs.within));

  const auto report = fit_mmdnmf(data.matrix, data.labels, cfg);
  EXPECT_LT(report.iterations.back().max_within_dist, initial_max_within);
  EXPECT_GT(report.iterations.back().min_between_dist, 0.0);
}

TEST(FitMmdnmf, VanishingTradeoffsTrackBaseline) {
  const auto data = generate_synthetic(2, 10, 8, 4.0, 1);
  auto cfg = config_with(2, 200);
  cfg.a = cfg.b = 1e-8;
  const auto base = fit_baseline(data.matrix, cfg);
  const auto sup = fit_mmdnmf(data.matrix, data.labels, cfg);
  ASSERT_EQ(base.iterations.size(), sup.iterations.size());
  const double e0 = base.iterations.back().reconstruction_error;
  const double e1 = sup.iterations.back().reconstruction_error;
  EXPECT_LE(std::abs(e0 - e1), 1e-4 * e0);
}

TEST(FitMmdnmf, AllDistinctLabelsFreezeEpsilonAtZero) {
  std::mt19937_64 rng(14);
  const auto x = test_support::random_matrix(rng, 4, 5);
  const auto report = fit_mmdnmf(x, LabelVector{"a", "b", "c", "d", "e"}, config_with(2, 20));
  ASSERT_EQ(report.iterations.size(), 20u);
  for (const auto& r : report.iterations) {
    EXPECT_EQ(r.epsilon, 0.0);
    EXPECT_EQ(r.max_within_dist, 0.0);
  }
}

TEST(FitMmdnmf, RejectsSingleClassAndBadLabels) {
  std::mt19937_64 rng(15);
  const auto x = test_support::random_matrix(rng, 4, 3);
  EXPECT_THROW(fit_mmdnmf(x, LabelVector{"a", "a", "a"}, config_with(2, 5)), InfeasibleError);
  EXPECT_THROW(fit_mmdnmf(x, LabelVector{"a", "b"}, config_with(2, 5)), DimensionError);
}

TEST(FitMmdnmf, PaperSlackModeStaysNonnegative) {
  const auto data = generate_synthetic(3, 6, 6, 5.0, 2);
  auto cfg = config_with(3, 100);
  cfg.slack_mode = SlackMode::paper;
  const auto report = fit_mmdnmf(data.matrix, data.labels, cfg);
  for (const auto& r : report.iterations) {
    EXPECT_GE(r.reconstruction_error, 0.0);
    EXPECT_GE(r.epsilon, 0.0);
    EXPECT_GE(r.zeta, 0.0);
  }
  EXPECT_GE(report.final_factorization.coeffs().values().minCoeff(), 0.0);
}

TEST(FitMmdnmf, Deterministic) {
  const auto data = generate_synthetic(3, 5, 6, 3.0, 9);
  const auto cfg = config_with(2, 50);
  EXPECT_EQ(fit_mmdnmf(data.matrix, data.labels, cfg), fit_mmdnmf(data.matrix, data.labels, cfg));
  EXPECT_EQ(fit_baseline(data.matrix, cfg), fit_baseline(data.matrix, cfg));
}

TEST(FixedPoint, ExactFactorizationSurvivesOneRound) {
  std::mt19937_64 rng(31);
  const auto u = test_support::random_matrix(rng, 6, 3);
  const auto v = test_support::random_matrix(rng, 3, 8);
  const DataMatrix x(u.values() * v.values());
  auto f = update_U(x, Factorization(u, v));
  f = update_V(x, f, WeightMatrices::zeros(8));
  EXPECT_LE(((f.basis().values() - u.values()).cwiseAbs().array() / u.values().array()).maxCoeff(), 1e-10);
  EXPECT_LE(((f.coeffs().values() - v.values()).cwiseAbs().array() / v.values().array()).maxCoeff(), 1e-10);
}

TEST(Project, RecoversTrainingColumn) {
  const auto u = DataMatrix::from_rows({{1.0, 0.2}, {0.1, 1.0}, {0.5, 0.5}});
  const auto v = DataMatrix::from_rows({{0.3, 1.2, 0.8}, {0.9, 0.4, 0.1}});
  const DataMatrix x(u.values() * v.values());
  const Eigen::VectorXd col = x.values().col(1);
  const auto coded = project(u, col, 200);
  EXPECT_LT((col - u.values() * coded).squaredNorm(), 1e-6);
}

TEST(Project, ZeroSampleAndIdentityBasis) {
  const auto u = DataMatrix::from_rows({{1, 0}, {0, 1}});
  const auto zero = project(u, Eigen::Vector2d(0, 0), 50);
  EXPECT_LT((u.values() * zero).cwiseAbs().maxCoeff(), 1e-6);

  const Eigen::Vector2d x(0.25, 3.0);
  EXPECT_LT((project(u, x, 50) - x).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Project, DimensionMismatch) {
  EXPECT_THROW(project(DataMatrix::zeros(3, 2), Eigen::Vector2d(1, 1), 5), DimensionError);
}
