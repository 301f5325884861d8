#include "slucb/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace slucb {

PosDefSolver::PosDefSolver(const Matrix& v) {
  if (v.rows() != v.cols()) throw ShapeError("PosDefSolver: matrix not square");
  llt_.compute(v);
  if (llt_.info() == Eigen::Success) return;

  const double jitter0 = 10.0 * std::numeric_limits<double>::epsilon() *
                         std::abs(v.trace());
  double jitter = jitter0 > 0.0 ? jitter0
                                : 10.0 * std::numeric_limits<double>::epsilon();
  for (int attempt = 0; attempt <= 3; ++attempt) {
    Matrix vj = v;
    vj.diagonal().array() += jitter;
    llt_.compute(vj);
    if (llt_.info() == Eigen::Success) return;
    jitter *= 2.0;
  }
  throw DegenerateMatrixError(
      "matrix not positive definite after jitter retries");
}

Vector PosDefSolver::solve(const Vector& rhs) const {
  if (rhs.size() != dim()) throw ShapeError("solve: dimension mismatch");
  return llt_.solve(rhs);
}

double PosDefSolver::mahalanobis(const Vector& x) const {
  if (x.size() != dim()) throw ShapeError("mahalanobis: dimension mismatch");
  // ||L^-1 x||, with V = L L'.
  Vector y = llt_.matrixL().solve(x);
  return y.norm();
}

Vector ridge_solve(const Vector& u, const Matrix& v) {
  return PosDefSolver(v).solve(u);
}

double mahalanobis_norm(const Vector& phi, const Matrix& v) {
  return PosDefSolver(v).mahalanobis(phi);
}

double ucb_score(const Vector& phi, const ModelState& model) {
  if (phi.size() != model.theta_hat.size() || phi.size() != model.gram.rows())
    throw ShapeError("ucb_score: dimension mismatch");
  return phi.dot(model.theta_hat) + model.beta * mahalanobis_norm(phi, model.gram);
}

double confidence_radius(double alpha, int d, std::int64_t t, double lambda) {
  if (alpha <= 0.0 || alpha > 1.0)
    throw std::invalid_argument("confidence_radius: alpha outside (0,1]");
  if (d < 1) throw std::invalid_argument("confidence_radius: d must be >= 1");
  if (t < 0) throw std::invalid_argument("confidence_radius: t must be >= 0");
  if (lambda <= 0.0)
    throw std::invalid_argument("confidence_radius: lambda must be > 0");
  const double td = static_cast<double>(t) / (static_cast<double>(d) * lambda);
  return std::sqrt(2.0 * std::log(2.0 / alpha) +
                   static_cast<double>(d) * std::log1p(td)) +
         std::sqrt(lambda);
}

}  // namespace slucb
