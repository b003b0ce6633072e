#include <gtest/gtest.h>

#include <random>

#include "mmdnmf/matrix.hpp"
#include "test_util.hpp"

using namespace mmdnmf;

TEST(DataMatrix, RejectsNegativeAndEmpty) {
  EXPECT_THROW(DataMatrix::from_rows({{1.0, -0.5}}), InputError);
  EXPECT_THROW(DataMatrix(RowMatrix(0, 3)), DimensionError);
  EXPECT_THROW(DataMatrix::from_rows({{1.0, std::nan("")}}), InputError);
}

TEST(Factorization, RankBoundedByShape) {
  // d = 3, n = 2: rank 3 exceeds min(d, n).
  EXPECT_THROW(Factorization(DataMatrix::zeros(3, 3), DataMatrix::zeros(3, 2)), ConfigError);
  EXPECT_THROW(Factorization(DataMatrix::zeros(3, 2), DataMatrix::zeros(1, 2)), DimensionError);
  EXPECT_EQ(Factorization(DataMatrix::zeros(3, 2), DataMatrix::zeros(2, 4)).rank(), 2u);
}

TEST(FrobeniusSq, Examples) {
  EXPECT_DOUBLE_EQ(frobenius_sq(DataMatrix::from_rows({{1, 2}, {3, 4}}), DataMatrix::zeros(2, 2)), 30.0);
  const auto a = DataMatrix::from_rows({{0.3, 7}, {2, 0}});
  EXPECT_EQ(frobenius_sq(a, a), 0.0);

  const Factorization f(DataMatrix::from_rows({{1}, {1}}), DataMatrix::from_rows({{1, 1}}));
  EXPECT_EQ(frobenius_sq(DataMatrix::from_rows({{1, 1}, {1, 1}}), DataMatrix(f.product())), 0.0);
}

TEST(FrobeniusSq, ShapeMismatch) {
  EXPECT_THROW(frobenius_sq(DataMatrix::zeros(2, 2), DataMatrix::zeros(2, 3)), DimensionError);
}

TEST(FrobeniusSq, SymmetricAndQuadraticInScale) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto a = test_support::random_matrix(rng, 3, 4);
    const auto b = test_support::random_matrix(rng, 3, 4);
    const double c = 0.5 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    EXPECT_DOUBLE_EQ(frobenius_sq(a, b), frobenius_sq(b, a));
    const DataMatrix ca(c * a.values());
    const DataMatrix cb(c * b.values());
    EXPECT_NEAR(frobenius_sq(ca, cb), c * c * frobenius_sq(a, b), 1e-12 * (1 + frobenius_sq(ca, cb)));
  }
}

TEST(RatioUpdate, Examples) {
  const auto fixed = ratio_update(DataMatrix::from_rows({{2}}), DataMatrix::from_rows({{3}}),
                                  DataMatrix::from_rows({{3}}), kDefaultGuard);
  EXPECT_NEAR(fixed(0, 0), 2.0, 1e-11);

  const auto doubled = ratio_update(DataMatrix::from_rows({{2}}), DataMatrix::from_rows({{4}}),
                                    DataMatrix::from_rows({{2}}), 1e-12);
  EXPECT_NEAR(doubled(0, 0), 4.0, 1e-9);

  const auto zeroed = ratio_update(DataMatrix::from_rows({{5}}), DataMatrix::from_rows({{0}}),
                                   DataMatrix::from_rows({{0}}), 1e-12);
  EXPECT_EQ(zeroed(0, 0), 0.0);
}

TEST(RatioUpdate, Errors) {
  const auto one = DataMatrix::from_rows({{1}});
  EXPECT_THROW(ratio_update(one, one, one, 0.0), ConfigError);
  EXPECT_THROW(ratio_update(one, one, one, -1e-12), ConfigError);
  EXPECT_THROW(ratio_update(one, DataMatrix::zeros(1, 2), one, 1e-12), DimensionError);
}

TEST(RatioUpdate, PreservesNonnegativity) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    // Sparse-ish inputs so exact zeros appear in every position.
    auto sparse = [&](std::size_t r, std::size_t c) {
      RowMatrix m = test_support::random_matrix(rng, r, c, 2.0).values();
      for (Eigen::Index i = 0; i < m.size(); ++i)
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) m.data()[i] = 0.0;
      return DataMatrix(m);
    };
    const auto out = ratio_update(sparse(4, 3), sparse(4, 3), sparse(4, 3), kDefaultGuard);
    EXPECT_GE(out.values().minCoeff(), 0.0);
  }
}

TEST(PairwiseSqDistance, Examples) {
  const auto v = DataMatrix::from_rows({{0, 1}, {0, 0}});
  EXPECT_EQ(pairwise_sq_distance(v, 0, 1), 1.0);
  const auto w = DataMatrix::from_rows({{1, 4}, {2, 6}});
  EXPECT_EQ(pairwise_sq_distance(w, 0, 1), 25.0);
  EXPECT_EQ(pairwise_sq_distance(w, 1, 1), 0.0);
}

TEST(PairwiseSqDistance, SymmetricAgainstBruteForce) {
  std::mt19937_64 rng(3);
  const auto v = test_support::random_matrix(rng, 4, 7);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) {
      double expected = 0.0;
      for (std::size_t r = 0; r < 4; ++r) expected += (v(r, i) - v(r, j)) * (v(r, i) - v(r, j));
      EXPECT_NEAR(pairwise_sq_distance(v, i, j), expected, 1e-14);
      EXPECT_EQ(pairwise_sq_distance(v, i, j), pairwise_sq_distance(v, j, i));
    }
  }
}

TEST(PairwiseSqDistance, IndexOutOfRange) {
  EXPECT_THROW(pairwise_sq_distance(DataMatrix::zeros(2, 3), 0, 3), IndexError);
}
