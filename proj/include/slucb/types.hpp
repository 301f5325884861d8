#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace slucb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Positive-definiteness could not be restored even after jitter retries.
struct DegenerateMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dimension or symmetry mismatch between operands.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Entrywise bit-exact symmetry check.
inline bool is_exactly_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

}  // namespace slucb
