#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slucb/protocol.hpp"

namespace slucb::amp {

/// Gaussian noise levels for the amplification protocol. sigma1 perturbs
/// Gram-matrix entries, sigma2 reward-feature entries; every calibration
/// here sets them equal.
struct AmpNoiseSpec {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  int batch = 1;
  /// False when epsilon exceeds the range the shuffle guarantee is stated
  /// for; calibration still proceeds (warning, not an error) and accounting
  /// reports the figure as asymptotic only.
  bool epsilon_in_range = true;
};

/// sigma1 = sigma2 = 4 sqrt(2 log(2.5 B / delta) log(2 / delta)) / (eps sqrt(B)).
/// Unique users; epsilon beyond sqrt(log(2/delta)/B) flags epsilon_in_range.
AmpNoiseSpec calibrate_amp(double epsilon, double delta, int batch);

/// Returning users (every user may appear once per batch):
/// sigma1 = sigma2 = 16 log(2/delta) sqrt(T log(5T/delta)) / (eps B).
AmpNoiseSpec calibrate_amp_returning(double epsilon, double delta, int batch,
                                     std::int64_t horizon);

/// Local-privacy-targeted calibration, independent of the batch size:
/// sigma = 4 sqrt(2 log(2.5/delta0)) / eps0.
AmpNoiseSpec calibrate_amp_ldp(double epsilon0, double delta0);

/// x + N(0, sigma^2 I), fresh noise per entry.
Vector randomize_vector(const Vector& x, double sigma, Rng& rng);

/// Symmetric perturbation: iid N(0, sigma^2) on the upper triangle including
/// the diagonal, mirrored below. Input must be exactly symmetric.
Matrix randomize_matrix(const Matrix& x, double sigma, Rng& rng);

/// Uniformly random permutation of a batch of messages.
template <typename T>
std::vector<T> shuffle_messages(std::vector<T> batch, Rng& rng) {
  if (batch.empty())
    throw std::invalid_argument("shuffle_messages: empty batch");
  const std::vector<std::size_t> perm = random_permutation(rng, batch.size());
  std::vector<T> out;
  out.reserve(batch.size());
  for (std::size_t i : perm) out.push_back(std::move(batch[i]));
  return out;
}

/// Entrywise sum of the received messages, in the given order.
Vector analyze_vectors(std::span<const Vector> messages);
Matrix analyze_matrices(std::span<const Matrix> messages);

/// Gaussian-mechanism sum protocol: used with shuffling for the
/// amplification protocol and without for the batched local baseline.
class GaussianSumProtocol : public ShuffleProtocol {
 public:
  GaussianSumProtocol(AmpNoiseSpec spec, bool shuffle, std::string name);

  void submit(const Vector& reward_feature, const Matrix& gram_term,
              Rng& rng) override;
  BatchStatistics flush(Rng& rng) override;
  double sigma_total(std::int64_t horizon) const override;
  std::string name() const override { return name_; }

  const AmpNoiseSpec& spec() const { return spec_; }

 private:
  AmpNoiseSpec spec_;
  bool shuffle_;
  std::string name_;
  std::vector<Vector> vector_messages_;
  std::vector<Matrix> matrix_messages_;
};

/// Shuffle protocol with the unique-user calibration.
GaussianSumProtocol make_amp_protocol(double epsilon, double delta, int batch);

/// Shuffle protocol with the returning-user calibration.
GaussianSumProtocol make_amp_protocol_returning(double epsilon, double delta,
                                                int batch, std::int64_t horizon);

}  // namespace slucb::amp
