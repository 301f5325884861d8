#include "slucb/protocol_amp.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace slucb::amp {

namespace {

void check_budget(double epsilon, double delta) {
  if (epsilon <= 0.0) throw std::invalid_argument("calibrate: epsilon must be > 0");
  if (delta <= 0.0 || delta > 1.0)
    throw std::invalid_argument("calibrate: delta outside (0,1]");
}

}  // namespace

AmpNoiseSpec calibrate_amp(double epsilon, double delta, int batch) {
  check_budget(epsilon, delta);
  if (batch < 1) throw std::invalid_argument("calibrate_amp: batch must be >= 1");
  const double b = static_cast<double>(batch);
  const double sigma =
      4.0 * std::sqrt(2.0 * std::log(2.5 * b / delta) * std::log(2.0 / delta)) /
      (epsilon * std::sqrt(b));
  AmpNoiseSpec spec{sigma, sigma, epsilon, delta, batch, true};
  spec.epsilon_in_range = epsilon <= std::sqrt(std::log(2.0 / delta) / b);
  return spec;
}

AmpNoiseSpec calibrate_amp_returning(double epsilon, double delta, int batch,
                                     std::int64_t horizon) {
  check_budget(epsilon, delta);
  if (batch < 1 || horizon < batch)
    throw std::invalid_argument("calibrate_amp_returning: need 1 <= B <= T");
  const double b = static_cast<double>(batch);
  const double t = static_cast<double>(horizon);
  const double sigma = 16.0 * std::log(2.0 / delta) *
                       std::sqrt(t * std::log(5.0 * t / delta)) / (epsilon * b);
  AmpNoiseSpec spec{sigma, sigma, epsilon, delta, batch, true};
  spec.epsilon_in_range =
      epsilon <= (2.0 / b) * std::log(2.0 / delta) * std::sqrt(2.0 * t);
  return spec;
}

AmpNoiseSpec calibrate_amp_ldp(double epsilon0, double delta0) {
  check_budget(epsilon0, delta0);
  const double sigma = 4.0 * std::sqrt(2.0 * std::log(2.5 / delta0)) / epsilon0;
  return AmpNoiseSpec{sigma, sigma, epsilon0, delta0, 1, epsilon0 <= 1.0};
}

Vector randomize_vector(const Vector& x, double sigma, Rng& rng) {
  Vector out = x;
  if (sigma == 0.0) return out;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += sigma * rng.normal();
  return out;
}

Matrix randomize_matrix(const Matrix& x, double sigma, Rng& rng) {
  if (!is_exactly_symmetric(x))
    throw ShapeError("randomize_matrix: input not symmetric");
  Matrix out = x;
  if (sigma == 0.0) return out;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = i; j < out.cols(); ++j) {
      const double noise = sigma * rng.normal();
      out(i, j) += noise;
      if (j != i) out(j, i) = out(i, j);
    }
  }
  return out;
}

Vector analyze_vectors(std::span<const Vector> messages) {
  if (messages.empty())
    throw std::invalid_argument("analyze_vectors: no messages");
  Vector sum = messages[0];
  for (std::size_t i = 1; i < messages.size(); ++i) {
    if (messages[i].size() != sum.size())
      throw ShapeError("analyze_vectors: message shape mismatch");
    sum += messages[i];
  }
  return sum;
}

Matrix analyze_matrices(std::span<const Matrix> messages) {
  if (messages.empty())
    throw std::invalid_argument("analyze_matrices: no messages");
  Matrix sum = messages[0];
  for (std::size_t i = 1; i < messages.size(); ++i) {
    if (messages[i].rows() != sum.rows() || messages[i].cols() != sum.cols())
      throw ShapeError("analyze_matrices: message shape mismatch");
    sum += messages[i];
  }
  return sum;
}

GaussianSumProtocol::GaussianSumProtocol(AmpNoiseSpec spec, bool shuffle,
                                         std::string name)
    : spec_(spec), shuffle_(shuffle), name_(std::move(name)) {}

void GaussianSumProtocol::submit(const Vector& reward_feature,
                                 const Matrix& gram_term, Rng& rng) {
  vector_messages_.push_back(randomize_vector(reward_feature, spec_.sigma2, rng));
  matrix_messages_.push_back(randomize_matrix(gram_term, spec_.sigma1, rng));
}

BatchStatistics GaussianSumProtocol::flush(Rng& rng) {
  if (vector_messages_.empty())
    throw std::logic_error("flush: no submitted messages");
  if (shuffle_) {
    vector_messages_ = shuffle_messages(std::move(vector_messages_), rng);
    matrix_messages_ = shuffle_messages(std::move(matrix_messages_), rng);
  }
  BatchStatistics stats;
  stats.u = analyze_vectors(vector_messages_);
  stats.v = analyze_matrices(matrix_messages_);
  vector_messages_.clear();
  matrix_messages_.clear();
  return stats;
}

double GaussianSumProtocol::sigma_total(std::int64_t horizon) const {
  // One fresh perturbation per round, so the cumulative per-entry std at the
  // horizon is sigma * sqrt(T).
  return spec_.sigma1 * std::sqrt(static_cast<double>(horizon));
}

GaussianSumProtocol make_amp_protocol(double epsilon, double delta, int batch) {
  return GaussianSumProtocol(calibrate_amp(epsilon, delta, batch), true,
                             "sdp-amp");
}

GaussianSumProtocol make_amp_protocol_returning(double epsilon, double delta,
                                                int batch,
                                                std::int64_t horizon) {
  return GaussianSumProtocol(
      calibrate_amp_returning(epsilon, delta, batch, horizon), true, "sdp-amp");
}

}  // namespace slucb::amp
