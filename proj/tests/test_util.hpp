#pragma once

#include <random>

#include "mmdnmf/matrix.hpp"

namespace mmdnmf::test_support {

inline DataMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double hi = 1.0) {
  std::uniform_real_distribution<double> u(0.0, hi);
  RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return DataMatrix(std::move(m));
}

}  // namespace mmdnmf::test_support
