#include "slucb/bandit.hpp"

#include <cmath>
#include <stdexcept>

namespace slucb {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Uniform direction on the (d-1)-sphere scaled to norm 1/sqrt(2), with the
// fixed 1/sqrt(2) entry appended. Degenerate zero draws are resampled.
Vector sample_bounded_feature(int d, Rng& rng) {
  Vector v(d);
  double norm = 0.0;
  do {
    for (int i = 0; i + 1 < d; ++i) v[i] = rng.normal();
    norm = v.head(d - 1).norm();
  } while (norm == 0.0);
  v.head(d - 1) *= kInvSqrt2 / norm;
  v[d - 1] = kInvSqrt2;
  return v;
}

}  // namespace

BanditInstance generate_instance(int d, int num_arms, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("generate_instance: d must be >= 2");
  if (num_arms < 2)
    throw std::invalid_argument("generate_instance: num_arms must be >= 2");
  Rng rng = make_stream(seed, 0, StreamPurpose::kInstance);
  BanditInstance inst;
  inst.dim = d;
  inst.num_arms = num_arms;
  inst.seed = seed;
  inst.theta_star = sample_bounded_feature(d, rng);
  return inst;
}

ContextArmSet sample_context(const BanditInstance& instance, std::int64_t round,
                             Rng& rng) {
  if (round < 1) throw std::invalid_argument("sample_context: round must be >= 1");
  ContextArmSet set;
  set.arms.resize(instance.num_arms, instance.dim);
  for (int a = 0; a < instance.num_arms; ++a) {
    set.arms.row(a) = sample_bounded_feature(instance.dim, rng).transpose();
  }
  return set;
}

int sample_reward(const BanditInstance& instance, const Vector& phi, Rng& rng) {
  if (phi.size() != instance.dim)
    throw ShapeError("sample_reward: feature dimension mismatch");
  double mean = instance.theta_star.dot(phi);
  if (mean < -1e-9 || mean > 1.0 + 1e-9)
    throw std::domain_error("sample_reward: mean reward outside [0,1]");
  if (mean < 0.0) mean = 0.0;
  if (mean > 1.0) mean = 1.0;
  return rng.bernoulli(mean) ? 1 : 0;
}

double instant_regret(const BanditInstance& instance,
                      const ContextArmSet& context, int chosen) {
  const int k = context.num_arms();
  if (chosen < 0 || chosen >= k)
    throw std::out_of_range("instant_regret: arm index out of range");
  const Vector means = context.arms * instance.theta_star;
  return means.maxCoeff() - means[chosen];
}

const ContextArmSet& ContextSampler::next(Rng& rng) {
  ++round_;
  if (resample_ || round_ == 1) {
    current_ = sample_context(*instance_, round_, rng);
  }
  return current_;
}

}  // namespace slucb
