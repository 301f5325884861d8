#pragma once

#include <cstdint>

#include "slucb/types.hpp"

namespace slucb {

/// Ridge regularizer and confidence level driving the ellipsoid radii.
struct RidgeConfig {
  double lambda = 1.0;  // > 0
  double alpha = 0.1;   // confidence level in (0, 1]
};

/// Server-side model after batch `batch_index`: estimate, Gram matrix, and
/// confidence radius. Immutable value; batch_end_time is the round at which
/// the statistics were last updated.
struct ModelState {
  Vector theta_hat;
  Matrix gram;
  double beta = 0.0;
  int batch_index = 0;
  std::int64_t batch_end_time = 0;
};

/// Cholesky factorization of a symmetric positive definite matrix. If the
/// factorization fails (injected noise can leave the Gram matrix indefinite),
/// a jitter of 10*eps*trace(V) is added to the diagonal and doubled up to
/// three times before giving up with DegenerateMatrixError.
class PosDefSolver {
 public:
  explicit PosDefSolver(const Matrix& v);

  Vector solve(const Vector& rhs) const;

  /// sqrt(x' V^-1 x)
  double mahalanobis(const Vector& x) const;

  Eigen::Index dim() const { return llt_.matrixLLT().rows(); }

 private:
  Eigen::LLT<Matrix> llt_;
};

/// Solves V theta = u for symmetric positive definite V.
Vector ridge_solve(const Vector& u, const Matrix& v);

/// sqrt(phi' V^-1 phi) for symmetric positive definite V.
double mahalanobis_norm(const Vector& phi, const Matrix& v);

/// <phi, theta_hat> + beta * ||phi||_{V^-1}
double ucb_score(const Vector& phi, const ModelState& model);

/// Confidence radius after t observations:
///   sqrt(2 log(2/alpha) + d log(1 + t/(d lambda))) + sqrt(lambda).
/// Nondecreasing in t, nonincreasing in alpha, always >= sqrt(lambda).
double confidence_radius(double alpha, int d, std::int64_t t, double lambda);

}  // namespace slucb
