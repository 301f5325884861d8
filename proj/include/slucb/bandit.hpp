#pragma once

#include <cstdint>
#include <vector>

#include "slucb/rng.hpp"
#include "slucb/types.hpp"

namespace slucb {

/// Synthetic linear bandit instance. theta_star has unit norm by
/// construction: a uniformly random (d-1)-dimensional direction scaled to
/// norm 1/sqrt(2), with a final 1/sqrt(2) entry appended. Arm features are
/// built the same way, so every mean reward <theta_star, phi> lies in [0,1].
struct BanditInstance {
  Vector theta_star;
  int dim = 0;
  int num_arms = 0;
  std::uint64_t seed = 0;
};

/// One round's action set: num_arms feature vectors, one per row.
struct ContextArmSet {
  Matrix arms;  // K x d, unit-norm rows

  int num_arms() const { return static_cast<int>(arms.rows()); }
  Vector arm(int a) const { return arms.row(a).transpose(); }
};

/// Per-round cumulative pseudo-regret of one episode. Nondecreasing.
struct RegretTrace {
  std::vector<double> cumulative;
};

BanditInstance generate_instance(int d, int num_arms, std::uint64_t seed);

/// Fresh arm set for one round; `round` is 1-based.
ContextArmSet sample_context(const BanditInstance& instance, std::int64_t round,
                             Rng& rng);

/// Bernoulli reward with mean <theta_star, phi>. The mean must lie in [0,1]
/// (tolerance 1e-9, then clamped). Consumes exactly one uniform.
int sample_reward(const BanditInstance& instance, const Vector& phi, Rng& rng);

/// max_a <theta_star, phi_a> - <theta_star, phi_chosen>, by exhaustive scan.
double instant_regret(const BanditInstance& instance,
                      const ContextArmSet& context, int chosen);

/// Supplies the per-round arm sets. In resampling mode (the default) a fresh
/// set is drawn every round; in fixed mode the round-1 set is reused, which
/// is only meant for debugging.
class ContextSampler {
 public:
  ContextSampler(const BanditInstance& instance, bool resample = true)
      : instance_(&instance), resample_(resample) {}

  const ContextArmSet& next(Rng& rng);

 private:
  const BanditInstance* instance_;
  bool resample_;
  std::int64_t round_ = 0;
  ContextArmSet current_;
};

}  // namespace slucb
