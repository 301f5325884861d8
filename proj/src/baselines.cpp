#include "slucb/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace slucb {

void IdentityProtocol::submit(const Vector& reward_feature,
                              const Matrix& gram_term, Rng&) {
  vector_messages_.push_back(reward_feature);
  matrix_messages_.push_back(gram_term);
}

BatchStatistics IdentityProtocol::flush(Rng&) {
  if (vector_messages_.empty())
    throw std::logic_error("flush: no submitted messages");
  BatchStatistics stats;
  stats.u = amp::analyze_vectors(vector_messages_);
  stats.v = amp::analyze_matrices(matrix_messages_);
  vector_messages_.clear();
  matrix_messages_.clear();
  return stats;
}

amp::GaussianSumProtocol make_local_protocol(double epsilon0, double delta0,
                                             int batch) {
  if (batch < 1)
    throw std::invalid_argument("make_local_protocol: batch must be >= 1");
  amp::AmpNoiseSpec spec = amp::calibrate_amp_ldp(epsilon0, delta0);
  spec.batch = batch;
  return amp::GaussianSumProtocol(spec, /*shuffle=*/false, "ldp");
}

CentralTreeProtocol::CentralTreeProtocol(int dim, std::int64_t leaves,
                                         double sigma_node)
    : dim_(dim), tree_(dim, leaves, sigma_node) {
  pending_u_ = Vector::Zero(dim);
  pending_v_ = Matrix::Zero(dim, dim);
  reported_u_ = Vector::Zero(dim);
  reported_v_ = Matrix::Zero(dim, dim);
}

void CentralTreeProtocol::submit(const Vector& reward_feature,
                                 const Matrix& gram_term, Rng&) {
  if (reward_feature.size() != dim_ || gram_term.rows() != dim_ ||
      gram_term.cols() != dim_)
    throw ShapeError("CentralTreeProtocol: statistic shape mismatch");
  pending_u_ += reward_feature;
  pending_v_ += gram_term;
  has_pending_ = true;
}

BatchStatistics CentralTreeProtocol::flush(Rng& rng) {
  if (!has_pending_) throw std::logic_error("flush: no submitted messages");
  tree_.insert(pending_u_, pending_v_, rng);
  pending_u_.setZero();
  pending_v_.setZero();
  has_pending_ = false;

  auto [prefix_u, prefix_v] = tree_.prefix(tree_.leaf_count());
  BatchStatistics stats;
  stats.u = prefix_u - reported_u_;
  stats.v = prefix_v - reported_v_;
  // The engine requires bit-exact symmetry.
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) stats.v(j, i) = stats.v(i, j);
  reported_u_ = std::move(prefix_u);
  reported_v_ = std::move(prefix_v);
  return stats;
}

double CentralTreeProtocol::sigma_total(std::int64_t) const {
  // A prefix sum reads at most depth() noisy nodes.
  return tree_.sigma_node() * std::sqrt(static_cast<double>(tree_.depth()));
}

CentralTreeProtocol make_central_protocol(int dim, double epsilon, double delta,
                                          std::int64_t horizon, int batch,
                                          int m0, double tree_constant) {
  if (batch < 1 || horizon < batch)
    throw std::invalid_argument("make_central_protocol: need 1 <= B <= T");
  const std::int64_t leaves = (horizon + batch - 1) / batch;
  const double sigma_node =
      calibrate_tree(epsilon, delta, leaves, m0, tree_constant);
  return CentralTreeProtocol(dim, leaves, sigma_node);
}

}  // namespace slucb
