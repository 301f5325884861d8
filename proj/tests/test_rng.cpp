#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "slucb/rng.hpp"

using namespace slucb;

namespace {

// Oracle: materialize the trials as individual bits.
std::int64_t binomial_bit_sum(Rng& rng, std::int64_t trials, double p) {
  std::int64_t ones = 0;
  for (std::int64_t i = 0; i < trials; ++i)
    if (rng.bernoulli(p)) ++ones;
  return ones;
}

double exact_binomial_pmf(int n, double p, int k) {
  double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                   std::lgamma(n - k + 1.0) + k * std::log(p) +
                   (n - k) * std::log1p(-p);
  return std::exp(log_pmf);
}

}  // namespace

TEST_CASE("streams are deterministic and purpose-separated") {
  Rng a = make_stream(42, 7, StreamPurpose::kContext);
  Rng b = make_stream(42, 7, StreamPurpose::kContext);
  Rng c = make_stream(42, 7, StreamPurpose::kReward);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  bool any_diff = false;
  Rng a2 = make_stream(42, 7, StreamPurpose::kContext);
  for (int i = 0; i < 100; ++i) any_diff |= a2.next_u64() != c.next_u64();
  CHECK(any_diff);
}

TEST_CASE("uniform lies in [0,1) with the right mean") {
  Rng rng(1);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("normal moments") {
  Rng rng(2);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("uniform_below covers the range without bias") {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_below(7)];
  for (int c : counts) CHECK(std::abs(c - n / 7) < 5 * std::sqrt(n / 7.0));
  CHECK_THROWS_AS(rng.uniform_below(0), std::invalid_argument);
}

TEST_CASE("random_permutation keeps the multiset and covers all orders") {
  Rng rng(4);
  auto p = random_permutation(rng, 1);
  CHECK(p == std::vector<std::size_t>{0});

  std::vector<std::size_t> seen(5, 0);
  auto q = random_permutation(rng, 5);
  for (std::size_t i : q) ++seen[i];
  for (std::size_t s : seen) CHECK(s == 1);
}

TEST_CASE("binomial matches the bit-summing oracle for small trial counts") {
  // Compare both samplers to the exact pmf; b <= 64 exercises the inversion
  // walk that the protocol relies on.
  for (const auto& [trials, p] : std::vector<std::pair<int, double>>{
           {10, 0.25}, {64, 0.25}, {17, 0.7}}) {
    Rng impl_rng(100 + trials);
    Rng oracle_rng(200 + trials);
    const int n = 200000;
    std::vector<int> impl_counts(trials + 1, 0);
    std::vector<int> oracle_counts(trials + 1, 0);
    for (int i = 0; i < n; ++i) {
      ++impl_counts[sample_binomial(impl_rng, trials, p)];
      ++oracle_counts[binomial_bit_sum(oracle_rng, trials, p)];
    }
    double chi2_impl = 0.0, chi2_oracle = 0.0;
    int df = 0;
    for (int k = 0; k <= trials; ++k) {
      const double expected = n * exact_binomial_pmf(trials, p, k);
      if (expected < 5.0) continue;
      ++df;
      chi2_impl += (impl_counts[k] - expected) * (impl_counts[k] - expected) /
                   expected;
      chi2_oracle += (oracle_counts[k] - expected) *
                     (oracle_counts[k] - expected) / expected;
    }
    const double limit = df + 6.0 * std::sqrt(2.0 * df);
    CHECK(chi2_impl < limit);
    CHECK(chi2_oracle < limit);
  }
}

TEST_CASE("binomial table sampler moments at larger trial counts") {
  for (const std::int64_t trials : {500LL, 50000LL}) {
    Rng rng(5);
    const double p = 0.25;
    const int n = 50000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = static_cast<double>(sample_binomial(rng, trials, p));
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double true_mean = trials * p;
    const double true_var = trials * p * (1 - p);
    CHECK(std::abs(mean - true_mean) <
          4.0 * std::sqrt(true_var / static_cast<double>(n)));
    CHECK(std::abs(var / true_var - 1.0) < 0.05);
  }
}

TEST_CASE("binomial gaussian fallback for gigantic trial counts") {
  const std::int64_t trials = 2'000'000'000'000LL;
  const double p = 0.25;
  BinomialSampler sampler(trials, p);
  Rng rng(6);
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(sampler(rng));
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  const double true_mean = static_cast<double>(trials) * p;
  const double true_var = static_cast<double>(trials) * p * (1 - p);
  CHECK(std::abs(mean - true_mean) < 4.0 * std::sqrt(true_var / n));
  CHECK(std::abs(var / true_var - 1.0) < 0.1);
}

TEST_CASE("binomial degenerate parameters") {
  Rng rng(7);
  CHECK(sample_binomial(rng, 0, 0.5) == 0);
  CHECK(sample_binomial(rng, 10, 0.0) == 0);
  CHECK(sample_binomial(rng, 10, 1.0) == 10);
  CHECK_THROWS_AS(sample_binomial(rng, -1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(sample_binomial(rng, 10, 1.5), std::invalid_argument);
}
