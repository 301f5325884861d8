#pragma once

#include <cstdint>
#include <string>

#include "slucb/rng.hpp"
#include "slucb/types.hpp"

namespace slucb {

/// One batch's aggregate statistics as recovered by the analyzer:
/// u approximates sum phi*y over the batch, v approximates sum phi*phi'.
/// v must be exactly symmetric.
struct BatchStatistics {
  Vector u;
  Matrix v;
};

/// A shuffle protocol: local randomizer, shuffler and analyzer over the two
/// statistic channels (feature-reward vectors and Gram-matrix terms).
/// submit() is called once per user with that user's raw contribution and
/// applies the local randomizer immediately; flush() runs the shuffler and
/// analyzer over the queued batch and resets for the next one. The engine's
/// model updates are fed exclusively by flush() outputs.
class ShuffleProtocol {
 public:
  virtual ~ShuffleProtocol() = default;

  virtual void submit(const Vector& reward_feature, const Matrix& gram_term,
                      Rng& rng) = 0;

  virtual BatchStatistics flush(Rng& rng) = 0;

  /// Standard deviation of the cumulative per-entry noise injected by the
  /// stated horizon. Feeds select_lambda.
  virtual double sigma_total(std::int64_t horizon) const = 0;

  virtual std::string name() const = 0;
};

}  // namespace slucb
