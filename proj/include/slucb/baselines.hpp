#pragma once

#include <cstdint>
#include <memory>

#include "slucb/protocol.hpp"
#include "slucb/protocol_amp.hpp"
#include "slucb/tree.hpp"

namespace slucb {

/// Non-private baseline: messages are the raw statistics, no shuffling, the
/// analyzer sums in arrival order.
class IdentityProtocol : public ShuffleProtocol {
 public:
  void submit(const Vector& reward_feature, const Matrix& gram_term,
              Rng& rng) override;
  BatchStatistics flush(Rng& rng) override;
  double sigma_total(std::int64_t) const override { return 0.0; }
  std::string name() const override { return "linucb"; }

 private:
  std::vector<Vector> vector_messages_;
  std::vector<Matrix> matrix_messages_;
};

/// Local-model baseline: Gaussian randomizer with batch-independent noise
/// sigma = 4 sqrt(2 log(2.5/delta0)) / eps0 and an identity shuffler. B = 1
/// recovers the sequential local model.
amp::GaussianSumProtocol make_local_protocol(double epsilon0, double delta0,
                                             int batch);

/// Central-model baseline: the analyzer inserts each batch's summed
/// statistics as one tree leaf and reports the difference of consecutive
/// noisy prefix sums, so the engine's running aggregates equal the tree
/// prefix at every batch end. m0 > 1 scales the node noise for user-level
/// privacy.
class CentralTreeProtocol : public ShuffleProtocol {
 public:
  CentralTreeProtocol(int dim, std::int64_t leaves, double sigma_node);

  void submit(const Vector& reward_feature, const Matrix& gram_term,
              Rng& rng) override;
  BatchStatistics flush(Rng& rng) override;
  double sigma_total(std::int64_t horizon) const override;
  std::string name() const override { return "jdp"; }

  const TreeAggregator& tree() const { return tree_; }

 private:
  int dim_;
  TreeAggregator tree_;
  Vector pending_u_;
  Matrix pending_v_;
  bool has_pending_ = false;
  Vector reported_u_;
  Matrix reported_v_;
};

CentralTreeProtocol make_central_protocol(int dim, double epsilon, double delta,
                                          std::int64_t horizon, int batch,
                                          int m0,
                                          double tree_constant = kConservativeTreeConstant);

}  // namespace slucb
