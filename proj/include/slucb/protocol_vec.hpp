#pragma once

#include <cstdint>
#include <vector>

#include "slucb/protocol.hpp"

namespace slucb::vec {

/// Paper-stated constants of the one-round and returning-user calibrations.
inline constexpr double kTheoryConstant = 24.0e4;
inline constexpr double kTheoryConstantReturning = 1.0e7;

/// Fixed-point encoding and binomial-noise parameters. Calibrations always
/// set p = 1/4; g and b are rounded up (finer encoding / more noise, so the
/// privacy guarantee is preserved).
struct VecParams {
  int g = 1;               // encoding granularity
  std::int64_t b = 0;      // binomial trials (0 only in hand-built tests)
  double p = 0.25;         // binomial success probability
  int batch = 1;           // B
  double epsilon = 0.0;
  double delta = 0.0;
  double constant = kTheoryConstant;  // leading constant used for b
};

/// Per-coordinate message: how many of the coordinate's bits are one.
/// Shifted inputs live in [0, 2] with unit sensitivity, so a coordinate's
/// encoding can reach 2g ones; each message therefore carries 2g + b bits.
struct LabeledBitCount {
  int label = 0;
  std::int64_t ones = 0;
  std::int64_t total_bits = 0;
};

/// g = ceil(max{2 sqrt(B), d, 4}),
/// b = ceil(C g^2 log^2(4(d^2+1)/delta) / (eps^2 B)), p = 1/4.
/// Requires eps in (0, 15] and delta in (0, 1/2); out of range is an error.
VecParams calibrate_vec(double epsilon, double delta, int batch, int dim,
                        double constant = kTheoryConstant);

/// Returning users: b = ceil(C log(2/delta) g^2 T log^2(8T(d^2+1)/(B delta))
/// / (eps^2 B^2)); g and p as above.
VecParams calibrate_vec_returning(double epsilon, double delta, int batch,
                                  std::int64_t horizon, int dim,
                                  double constant = kTheoryConstantReturning);

/// Scalar randomizer over x in [0, 2]: fixed-point value floor(x g) plus a
/// Bernoulli rounding bit, plus Bin(b, p) noise ones.
/// E[ones] = x g + b p; total_bits = 2g + b.
LabeledBitCount scalar_randomize(double x, const VecParams& params, Rng& rng,
                                 int label = 0);

/// De-biased scalar sum over one label's merged counts from a batch of B
/// users: (ones - p b B)/g - B. Expectation equals the sum of the original
/// (unshifted) scalars.
double scalar_analyze(const LabeledBitCount& merged, const VecParams& params,
                      int batch);

/// Entries of x must lie in [-1, 1]; each is shifted by +1 and randomized.
/// Labels are the coordinate indices 0..d-1.
std::vector<LabeledBitCount> randomize_vector(const Vector& x,
                                              const VecParams& params, Rng& rng);

/// Upper-triangle coordinates of an exactly symmetric matrix, one
/// randomization per (i, j) with i <= j; labels are upper_tri_label(i, j, d).
std::vector<LabeledBitCount> randomize_matrix(const Matrix& x,
                                              const VecParams& params, Rng& rng);

int upper_tri_label(int i, int j, int dim);

/// Merges a batch of per-user messages by label (ones and total bits sum).
/// The bits are exchangeable, so this is observationally equivalent to
/// shuffling all individual bits and regrouping them by label.
std::vector<LabeledBitCount> shuffle_merge(
    const std::vector<std::vector<LabeledBitCount>>& users);

/// Per-label scalar_analyze over merged counts. Labels must cover exactly
/// 0..d-1 (vector) or the upper triangle (matrix, mirrored output).
Vector analyze_vector(const std::vector<LabeledBitCount>& merged,
                      const VecParams& params, int batch, int dim);
Matrix analyze_matrix(const std::vector<LabeledBitCount>& merged,
                      const VecParams& params, int batch, int dim);

class VecProtocol : public ShuffleProtocol {
 public:
  VecProtocol(int dim, VecParams params);

  void submit(const Vector& reward_feature, const Matrix& gram_term,
              Rng& rng) override;
  BatchStatistics flush(Rng& rng) override;
  double sigma_total(std::int64_t horizon) const override;
  std::string name() const override { return "sdp-vec"; }

  const VecParams& params() const { return params_; }

 private:
  int dim_;
  VecParams params_;
  std::vector<std::vector<LabeledBitCount>> vector_messages_;
  std::vector<std::vector<LabeledBitCount>> matrix_messages_;
};

}  // namespace slucb::vec
