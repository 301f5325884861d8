#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace slucb {

/// Deterministic 64-bit generator (SplitMix64). Pure integer arithmetic, so
/// the raw stream is reproducible across platforms and compilers. Real-valued
/// draws (normal, binomial) additionally depend on the platform's libm, which
/// is stable for a given toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 bits of resolution.
  double uniform();

  /// Uniform integer in [0, n). Unbiased (rejection sampling). n >= 1.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal();

  /// Bernoulli(p); consumes exactly one uniform.
  bool bernoulli(double p);

 private:
  std::uint64_t state_;
};

/// Derives an independent stream from a base seed and a path of identifying
/// words, e.g. {episode, purpose}. Each (seed, path) pair names one stream;
/// the derivation is a SplitMix64 finalizer folded over the path.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Stream purposes used by the simulation. One stream per
/// (instance seed, episode, purpose); see make_stream. Streams are not keyed
/// by algorithm, so runs that differ only in the protocol (or its noise
/// scale) share context, reward and noise draws: paired comparisons across
/// algorithms use common random numbers. The shuffler has its own stream so
/// that permutation draws never shift the noise sequence.
enum class StreamPurpose : std::uint64_t {
  kInstance = 1,
  kContext = 2,
  kReward = 3,
  kPrivacyNoise = 4,
  kShuffler = 5,
};

Rng make_stream(std::uint64_t seed, std::uint64_t episode, StreamPurpose purpose);

/// Uniformly random permutation of {0, .., n-1} (Fisher-Yates).
std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n);

/// Binomial(trials, p) sampler for a fixed parameter pair. Sampling is CDF
/// inversion on a precomputed table and consumes exactly one uniform. For
/// trials <= 4096 the full support is tabulated (exact to double rounding);
/// above that the table covers mean +- 10 standard deviations, which carries
/// all probability mass representable in a double CDF. When even the window
/// would exceed the table cap (trials beyond ~1e12) a rounded Gaussian with
/// matching mean and variance stands in; its total-variation error is
/// O(1/sqrt(trials)).
class BinomialSampler {
 public:
  BinomialSampler(std::int64_t trials, double p);

  std::int64_t operator()(Rng& rng) const;

  std::int64_t trials() const { return trials_; }
  double p() const { return p_; }

 private:
  std::int64_t trials_ = 0;
  double p_ = 0.0;
  bool gaussian_ = false;          // table too wide; sample rounded normal
  std::int64_t lo_ = 0;            // first tabulated outcome
  std::vector<double> cdf_;        // cdf_[i] = P(X <= lo_ + i)
};

/// Binomial(trials, p) draw. Direct inversion walk for trials <= 64 (exact),
/// otherwise a cached BinomialSampler table; consumes exactly one uniform.
std::int64_t sample_binomial(Rng& rng, std::int64_t trials, double p);

}  // namespace slucb
