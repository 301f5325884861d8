#include "slucb/rng.hpp"

#include <cmath>
#include <algorithm>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace slucb {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be >= 1");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
  std::uint64_t v = next_u64();
  while (v > limit) v = next_u64();
  return v % n;
}

double Rng::normal() {
  // u1 in (0,1] so the log is finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed + kGolden);
  for (std::uint64_t w : path) h = mix64(h ^ (w + kGolden));
  return Rng(h);
}

Rng make_stream(std::uint64_t seed, std::uint64_t episode, StreamPurpose purpose) {
  return make_stream(seed, {episode, static_cast<std::uint64_t>(purpose)});
}

std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
  }
  return perm;
}

BinomialSampler::BinomialSampler(std::int64_t trials, double p)
    : trials_(trials), p_(p) {
  if (trials < 0) throw std::invalid_argument("binomial: trials must be >= 0");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: p outside [0,1]");
  if (trials == 0 || p == 0.0) {
    lo_ = 0;
    cdf_ = {1.0};
    return;
  }
  if (p == 1.0) {
    lo_ = trials;
    cdf_ = {1.0};
    return;
  }

  const double mean = static_cast<double>(trials) * p;
  const double sd = std::sqrt(mean * (1.0 - p));
  std::int64_t lo = 0;
  std::int64_t hi = trials;
  if (trials > 4096) {
    lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(mean - 10.0 * sd) - 2);
    hi = std::min<std::int64_t>(trials, static_cast<std::int64_t>(mean + 10.0 * sd) + 2);
  }
  constexpr std::int64_t kMaxTableWidth = std::int64_t{1} << 23;
  if (hi - lo + 1 > kMaxTableWidth) {
    gaussian_ = true;
    return;
  }
  lo_ = lo;

  // pmf by outward recurrence from the mode; log-scaled start avoids
  // overflow for large trials.
  const std::int64_t mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>((trials + 1) * p), lo, hi);
  const double log_pmf_mode =
      std::lgamma(static_cast<double>(trials) + 1.0) -
      std::lgamma(static_cast<double>(mode) + 1.0) -
      std::lgamma(static_cast<double>(trials - mode) + 1.0) +
      static_cast<double>(mode) * std::log(p) +
      static_cast<double>(trials - mode) * std::log1p(-p);

  const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
  std::vector<double> pmf(width, 0.0);
  pmf[static_cast<std::size_t>(mode - lo)] = std::exp(log_pmf_mode);
  const double odds = p / (1.0 - p);
  for (std::int64_t k = mode; k < hi; ++k) {
    const double ratio = odds * static_cast<double>(trials - k) / static_cast<double>(k + 1);
    pmf[static_cast<std::size_t>(k + 1 - lo)] = pmf[static_cast<std::size_t>(k - lo)] * ratio;
  }
  for (std::int64_t k = mode; k > lo; --k) {
    const double ratio = static_cast<double>(k) / (odds * static_cast<double>(trials - k + 1));
    pmf[static_cast<std::size_t>(k - 1 - lo)] = pmf[static_cast<std::size_t>(k - lo)] * ratio;
  }

  cdf_.resize(width);
  double acc = 0.0;
  for (std::size_t i = 0; i < width; ++i) {
    acc += pmf[i];
    cdf_[i] = acc;
  }
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

std::int64_t BinomialSampler::operator()(Rng& rng) const {
  if (gaussian_) {
    const double mean = static_cast<double>(trials_) * p_;
    const double sd = std::sqrt(mean * (1.0 - p_));
    const double draw = std::round(mean + sd * rng.normal());
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(draw), 0, trials_);
  }
  const double u = rng.uniform();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return lo_ + static_cast<std::int64_t>(it - cdf_.begin());
}

std::int64_t sample_binomial(Rng& rng, std::int64_t trials, double p) {
  if (trials < 0) throw std::invalid_argument("binomial: trials must be >= 0");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: p outside [0,1]");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  if (trials <= 64) {
    // Inversion walk over the exact pmf recurrence, one uniform.
    double pmf = std::pow(1.0 - p, static_cast<double>(trials));
    double acc = pmf;
    const double odds = p / (1.0 - p);
    const double u = rng.uniform();
    std::int64_t k = 0;
    while (u >= acc && k < trials) {
      pmf *= odds * static_cast<double>(trials - k) / static_cast<double>(k + 1);
      acc += pmf;
      ++k;
    }
    return k;
  }
  thread_local std::unique_ptr<BinomialSampler> cached;
  if (!cached || cached->trials() != trials || cached->p() != p) {
    cached = std::make_unique<BinomialSampler>(trials, p);
  }
  return (*cached)(rng);
}

}  // namespace slucb
