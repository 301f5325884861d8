#include "slucb/protocol_vec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace slucb::vec {

namespace {

void check_budget(double epsilon, double delta) {
  if (epsilon <= 0.0 || epsilon > 15.0)
    throw std::domain_error("calibrate_vec: epsilon outside (0, 15]");
  if (delta <= 0.0 || delta >= 0.5)
    throw std::domain_error("calibrate_vec: delta outside (0, 1/2)");
}

int granularity(int batch, int dim) {
  const double raw =
      std::max({2.0 * std::sqrt(static_cast<double>(batch)),
                static_cast<double>(dim), 4.0});
  return static_cast<int>(std::ceil(raw));
}

std::int64_t ceil_to_int64(double x) {
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

VecParams calibrate_vec(double epsilon, double delta, int batch, int dim,
                        double constant) {
  check_budget(epsilon, delta);
  if (batch < 1) throw std::invalid_argument("calibrate_vec: batch must be >= 1");
  if (dim < 1) throw std::invalid_argument("calibrate_vec: dim must be >= 1");
  VecParams params;
  params.g = granularity(batch, dim);
  const double d2 = static_cast<double>(dim) * dim + 1.0;
  const double log_term = std::log(4.0 * d2 / delta);
  params.b = ceil_to_int64(constant * params.g * params.g * log_term * log_term /
                           (epsilon * epsilon * batch));
  params.p = 0.25;
  params.batch = batch;
  params.epsilon = epsilon;
  params.delta = delta;
  params.constant = constant;
  return params;
}

VecParams calibrate_vec_returning(double epsilon, double delta, int batch,
                                  std::int64_t horizon, int dim,
                                  double constant) {
  check_budget(epsilon, delta);
  if (batch < 1 || horizon < batch)
    throw std::invalid_argument("calibrate_vec_returning: need 1 <= B <= T");
  if (dim < 1) throw std::invalid_argument("calibrate_vec: dim must be >= 1");
  VecParams params;
  params.g = granularity(batch, dim);
  const double d2 = static_cast<double>(dim) * dim + 1.0;
  const double t = static_cast<double>(horizon);
  const double log_term = std::log(8.0 * t * d2 / (batch * delta));
  params.b = ceil_to_int64(constant * std::log(2.0 / delta) * params.g *
                           params.g * t * log_term * log_term /
                           (epsilon * epsilon * batch * batch));
  params.p = 0.25;
  params.batch = batch;
  params.epsilon = epsilon;
  params.delta = delta;
  params.constant = constant;
  return params;
}

LabeledBitCount scalar_randomize(double x, const VecParams& params, Rng& rng,
                                 int label) {
  if (x < -1e-9 || x > 2.0 + 1e-9)
    throw std::domain_error("scalar_randomize: input outside [0, 2]");
  x = std::min(std::max(x, 0.0), 2.0);
  const double scaled = x * static_cast<double>(params.g);
  const double whole = std::floor(scaled);
  const std::int64_t rounded =
      static_cast<std::int64_t>(whole) + (rng.bernoulli(scaled - whole) ? 1 : 0);
  const std::int64_t noise = sample_binomial(rng, params.b, params.p);
  LabeledBitCount out;
  out.label = label;
  out.ones = rounded + noise;
  out.total_bits = 2 * static_cast<std::int64_t>(params.g) + params.b;
  return out;
}

double scalar_analyze(const LabeledBitCount& merged, const VecParams& params,
                      int batch) {
  const std::int64_t expected =
      static_cast<std::int64_t>(batch) *
      (2 * static_cast<std::int64_t>(params.g) + params.b);
  if (merged.total_bits != expected)
    throw std::invalid_argument(
        "scalar_analyze: bit count does not match " + std::to_string(batch) +
        " users");
  const double debiased =
      (static_cast<double>(merged.ones) -
       params.p * static_cast<double>(params.b) * static_cast<double>(batch)) /
      static_cast<double>(params.g);
  return debiased - static_cast<double>(batch);
}

std::vector<LabeledBitCount> randomize_vector(const Vector& x,
                                              const VecParams& params,
                                              Rng& rng) {
  std::vector<LabeledBitCount> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (x[k] < -1.0 - 1e-9 || x[k] > 1.0 + 1e-9)
      throw std::domain_error("randomize_vector: entry outside [-1, 1]");
    out.push_back(
        scalar_randomize(x[k] + 1.0, params, rng, static_cast<int>(k)));
  }
  return out;
}

int upper_tri_label(int i, int j, int dim) {
  if (i > j || j >= dim || i < 0) throw std::out_of_range("upper_tri_label");
  return i * dim - i * (i - 1) / 2 + (j - i);
}

std::vector<LabeledBitCount> randomize_matrix(const Matrix& x,
                                              const VecParams& params,
                                              Rng& rng) {
  if (!is_exactly_symmetric(x))
    throw ShapeError("randomize_matrix: input not symmetric");
  const int d = static_cast<int>(x.rows());
  std::vector<LabeledBitCount> out;
  out.reserve(static_cast<std::size_t>(d) * (d + 1) / 2);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      if (x(i, j) < -1.0 - 1e-9 || x(i, j) > 1.0 + 1e-9)
        throw std::domain_error("randomize_matrix: entry outside [-1, 1]");
      out.push_back(scalar_randomize(x(i, j) + 1.0, params, rng,
                                     upper_tri_label(i, j, d)));
    }
  }
  return out;
}

std::vector<LabeledBitCount> shuffle_merge(
    const std::vector<std::vector<LabeledBitCount>>& users) {
  if (users.empty()) throw std::invalid_argument("shuffle_merge: empty batch");
  const std::size_t labels = users.front().size();
  std::vector<LabeledBitCount> merged = users.front();
  for (std::size_t u = 1; u < users.size(); ++u) {
    if (users[u].size() != labels)
      throw std::invalid_argument("shuffle_merge: label sets differ");
    for (std::size_t k = 0; k < labels; ++k) {
      if (users[u][k].label != merged[k].label ||
          users[u][k].total_bits != users.front()[k].total_bits)
        throw std::invalid_argument(
            "shuffle_merge: inconsistent labels or bit totals");
      merged[k].ones += users[u][k].ones;
      merged[k].total_bits += users[u][k].total_bits;
    }
  }
  return merged;
}

namespace {

const LabeledBitCount& find_label(const std::vector<LabeledBitCount>& merged,
                                  int label) {
  for (const LabeledBitCount& c : merged)
    if (c.label == label) return c;
  throw std::invalid_argument("analyze: missing label " + std::to_string(label));
}

}  // namespace

Vector analyze_vector(const std::vector<LabeledBitCount>& merged,
                      const VecParams& params, int batch, int dim) {
  Vector out(dim);
  for (int k = 0; k < dim; ++k)
    out[k] = scalar_analyze(find_label(merged, k), params, batch);
  return out;
}

Matrix analyze_matrix(const std::vector<LabeledBitCount>& merged,
                      const VecParams& params, int batch, int dim) {
  Matrix out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double value = scalar_analyze(
          find_label(merged, upper_tri_label(i, j, dim)), params, batch);
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

VecProtocol::VecProtocol(int dim, VecParams params)
    : dim_(dim), params_(params) {
  if (dim < 1) throw std::invalid_argument("VecProtocol: dim must be >= 1");
}

void VecProtocol::submit(const Vector& reward_feature, const Matrix& gram_term,
                         Rng& rng) {
  vector_messages_.push_back(randomize_vector(reward_feature, params_, rng));
  matrix_messages_.push_back(randomize_matrix(gram_term, params_, rng));
}

BatchStatistics VecProtocol::flush(Rng& rng) {
  (void)rng;  // bit permutation is count-preserving; see shuffle_merge
  if (vector_messages_.empty())
    throw std::logic_error("flush: no submitted messages");
  const int batch = static_cast<int>(vector_messages_.size());
  BatchStatistics stats;
  stats.u = analyze_vector(shuffle_merge(vector_messages_), params_, batch, dim_);
  stats.v = analyze_matrix(shuffle_merge(matrix_messages_), params_, batch, dim_);
  vector_messages_.clear();
  matrix_messages_.clear();
  return stats;
}

double VecProtocol::sigma_total(std::int64_t horizon) const {
  const double batch = static_cast<double>(params_.batch);
  const double batches =
      std::ceil(static_cast<double>(horizon) / batch);
  const double per_batch_var =
      (batch / 4.0 + batch * static_cast<double>(params_.b) / 4.0) /
      (static_cast<double>(params_.g) * static_cast<double>(params_.g));
  return std::sqrt(batches * per_batch_var);
}

}  // namespace slucb::vec
