#include <doctest.h>

#include <cmath>
#include <set>

#include "slucb/protocol_vec.hpp"

using namespace slucb;

namespace {

vec::VecParams small_params(int g, std::int64_t b, int batch) {
  vec::VecParams p;
  p.g = g;
  p.b = b;
  p.p = 0.25;
  p.batch = batch;
  return p;
}

}  // namespace

TEST_CASE("calibrate_vec values") {
  const vec::VecParams p = vec::calibrate_vec(1.0, 0.1, 20, 5);
  CHECK(p.g == 9);  // ceil(max{2 sqrt(20), 5, 4}) = ceil(8.944)
  // 24e4 * 81 * ln(1040)^2 / 20, rounded up; checked against an independent
  // long-double evaluation.
  const long double log_term = std::log(1040.0L);
  const long double expected =
      std::ceil(24.0e4L * 81.0L * log_term * log_term / 20.0L);
  CHECK(static_cast<long double>(p.b) == expected);
  CHECK(p.b == 46909183);
  CHECK(p.p == 0.25);

  // demo constant
  CHECK(vec::calibrate_vec(1.0, 0.1, 20, 5, 10.0).b == 1955);
}

TEST_CASE("calibrate_vec p is always 1/4 and g covers the three regimes") {
  CHECK(vec::calibrate_vec(2.0, 0.2, 1, 1).g == 4);    // floor regime
  CHECK(vec::calibrate_vec(2.0, 0.2, 1, 12).g == 12);  // d regime
  CHECK(vec::calibrate_vec(2.0, 0.2, 100, 3).g == 20); // 2 sqrt(B) regime
  for (double eps : {0.5, 3.0, 15.0})
    CHECK(vec::calibrate_vec(eps, 0.3, 10, 4).p == 0.25);
}

TEST_CASE("calibrate_vec range errors are strict") {
  CHECK_THROWS_AS(vec::calibrate_vec(0.0, 0.1, 20, 5), std::domain_error);
  CHECK_THROWS_AS(vec::calibrate_vec(15.5, 0.1, 20, 5), std::domain_error);
  CHECK_THROWS_AS(vec::calibrate_vec(1.0, 0.5, 20, 5), std::domain_error);
  CHECK_THROWS_AS(vec::calibrate_vec(1.0, 0.0, 20, 5), std::domain_error);
}

TEST_CASE("calibrate_vec_returning comparisons") {
  // returning b exceeds unique b whenever T > B
  for (double eps : {0.5, 1.0, 10.0}) {
    for (int b : {5, 20, 100}) {
      for (std::int64_t t : {200LL, 5000LL}) {
        if (t <= b) continue;
        CHECK(vec::calibrate_vec_returning(eps, 0.1, b, t, 4).b >
              vec::calibrate_vec(eps, 0.1, b, 4).b);
        CHECK(vec::calibrate_vec_returning(eps, 0.1, b, t, 4).g ==
              vec::calibrate_vec(eps, 0.1, b, 4).g);
      }
    }
  }

  // 1/B^2 scaling once g is pinned by a large dimension
  const double b1 = static_cast<double>(
      vec::calibrate_vec_returning(1.0, 0.1, 10, 10000, 100).b);
  const double b2 = static_cast<double>(
      vec::calibrate_vec_returning(1.0, 0.1, 20, 10000, 100).b);
  CHECK(b1 / b2 > 3.5);
  CHECK(b1 / b2 < 4.5);
}

TEST_CASE("scalar_randomize enumerated distribution at x=0.5, g=4, b=2") {
  const vec::VecParams p = small_params(4, 2, 1);
  Rng rng(1);
  // floor(0.5*4)=2 and the rounding Bernoulli is degenerate, so
  // ones = 2 + Bin(2, 1/4) in {2,3,4} with probabilities 9/16, 6/16, 1/16.
  const int n = 100000;
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const vec::LabeledBitCount m = vec::scalar_randomize(0.5, p, rng);
    REQUIRE(m.ones >= 2);
    REQUIRE(m.ones <= 4);
    CHECK(m.total_bits == 2 * 4 + 2);
    ++counts[m.ones - 2];
  }
  const double probs[3] = {9.0 / 16.0, 6.0 / 16.0, 1.0 / 16.0};
  double mean = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double freq = static_cast<double>(counts[k]) / n;
    CHECK(std::abs(freq - probs[k]) <
          4.0 * std::sqrt(probs[k] * (1 - probs[k]) / n));
    mean += (2.0 + k) * freq;
  }
  CHECK(mean == doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("scalar_randomize edge cases") {
  const vec::VecParams p = small_params(4, 2, 1);
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const vec::LabeledBitCount m = vec::scalar_randomize(0.0, p, rng);
    CHECK(m.ones <= 2);  // gamma2 only
  }
  CHECK_THROWS_AS(vec::scalar_randomize(-0.1, p, rng), std::domain_error);
  CHECK_THROWS_AS(vec::scalar_randomize(2.1, p, rng), std::domain_error);
}

TEST_CASE("scalar_randomize Monte Carlo mean at x=0.37, g=8, b=16") {
  const vec::VecParams p = small_params(8, 16, 1);
  Rng rng(3);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += static_cast<double>(vec::scalar_randomize(0.37, p, rng).ones);
  const double expected = 0.37 * 8 + 16 * 0.25;
  const double frac = 0.37 * 8 - std::floor(0.37 * 8);
  const double var = frac * (1 - frac) + 16 * 0.25 * 0.75;
  CHECK(std::abs(sum / n - expected) < 4.0 * std::sqrt(var / n));
}

TEST_CASE("scalar_analyze closed forms") {
  const vec::VecParams p = small_params(4, 2, 1);
  vec::LabeledBitCount merged{0, 3, 10};  // one user: total 2g+b = 10 bits
  CHECK(vec::scalar_analyze(merged, p, 1) == doctest::Approx(-0.375));

  // expectation over the randomizer for w = 1.5: enumerate gamma2
  const double probs[3] = {9.0 / 16.0, 6.0 / 16.0, 1.0 / 16.0};
  double expectation = 0.0;
  for (int g2 = 0; g2 <= 2; ++g2) {
    const vec::LabeledBitCount c{0, 6 + g2, 10};
    expectation += probs[g2] * vec::scalar_analyze(c, p, 1);
  }
  CHECK(expectation == doctest::Approx(0.5).epsilon(1e-12));

  // user-count mismatch
  CHECK_THROWS_AS(vec::scalar_analyze(merged, p, 2), std::invalid_argument);
}

TEST_CASE("zero-noise limit recovers exact sums") {
  const vec::VecParams p = small_params(4, 0, 1);
  Rng rng(4);
  // x*g integral: x = 0.75 shifts to 1.75, and 1.75*4 = 7 exactly
  const vec::LabeledBitCount m = vec::scalar_randomize(1.75, p, rng);
  CHECK(m.ones == 7);
  CHECK(vec::scalar_analyze(m, p, 1) == doctest::Approx(0.75));
}

TEST_CASE("randomize_vector labels and shift") {
  const vec::VecParams p = small_params(4, 0, 1);
  Rng rng(5);
  const std::vector<vec::LabeledBitCount> msgs =
      vec::randomize_vector(Vector::Zero(3), p, rng);
  REQUIRE(msgs.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(msgs[k].label == k);
    CHECK(msgs[k].ones == 4);  // encoding of the shift value 1 with b = 0
  }
  Vector bad(2);
  bad << 1.5, 0.0;
  CHECK_THROWS_AS(vec::randomize_vector(bad, p, rng), std::domain_error);
}

TEST_CASE("randomize_matrix emits the upper triangle once") {
  const vec::VecParams p = small_params(8, 2, 1);
  Rng rng(6);
  Matrix x(3, 3);
  x << 0.5, 0.1, -0.2, 0.1, 0.3, 0.0, -0.2, 0.0, 0.9;
  const std::vector<vec::LabeledBitCount> msgs = vec::randomize_matrix(x, p, rng);
  CHECK(msgs.size() == 6);  // d(d+1)/2
  std::set<int> labels;
  for (const auto& m : msgs) labels.insert(m.label);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      CHECK(labels.count(vec::upper_tri_label(i, j, 3)) == 1);

  Matrix asym = x;
  asym(0, 1) += 0.05;
  CHECK_THROWS_AS(vec::randomize_matrix(asym, p, rng), ShapeError);
}

TEST_CASE("shuffle_merge bookkeeping") {
  const vec::VecParams p = small_params(4, 2, 3);
  Rng rng(7);
  std::vector<std::vector<vec::LabeledBitCount>> users;
  for (int u = 0; u < 3; ++u) {
    Vector x = Vector::Constant(2, 0.25 * (u + 1) - 0.5);
    users.push_back(vec::randomize_vector(x, p, rng));
  }
  // B=1 passthrough
  const auto single = vec::shuffle_merge({users[0]});
  CHECK(single[0].ones == users[0][0].ones);

  const auto merged = vec::shuffle_merge(users);
  REQUIRE(merged.size() == 2);
  for (const auto& m : merged) CHECK(m.total_bits == 3 * (2 * 4 + 2));

  // invariant under user order
  const auto reversed = vec::shuffle_merge({users[2], users[1], users[0]});
  CHECK(reversed[0].ones == merged[0].ones);
  CHECK(reversed[1].ones == merged[1].ones);

  auto inconsistent = users;
  inconsistent[1][0].total_bits += 1;
  CHECK_THROWS_AS(vec::shuffle_merge(inconsistent), std::invalid_argument);
}

TEST_CASE("analyze_matrix mirrors exactly and the noiseless limit is exact") {
  const vec::VecParams p = small_params(4, 0, 2);
  Rng rng(8);
  Matrix x(2, 2);
  x << 0.5, -0.25, -0.25, 0.75;  // entries with exact g-multiples after shift
  std::vector<std::vector<vec::LabeledBitCount>> users{
      vec::randomize_matrix(x, p, rng), vec::randomize_matrix(x, p, rng)};
  const Matrix out = vec::analyze_matrix(vec::shuffle_merge(users), p, 2, 2);
  CHECK(out(0, 1) == out(1, 0));
  CHECK((out - 2.0 * x).cwiseAbs().maxCoeff() < 1e-12);

  // missing label
  auto merged = vec::shuffle_merge(users);
  merged.pop_back();
  CHECK_THROWS_AS(vec::analyze_matrix(merged, p, 2, 2), std::invalid_argument);
}

TEST_CASE("analyzer outputs live on the shifted 1/g lattice") {
  const vec::VecParams p = small_params(8, 16, 5);
  Rng rng(9);
  std::vector<std::vector<vec::LabeledBitCount>> users;
  for (int u = 0; u < 5; ++u) {
    Vector x(3);
    for (int k = 0; k < 3; ++k) x[k] = rng.uniform() * 2.0 - 1.0;
    users.push_back(vec::randomize_vector(x, p, rng));
  }
  const Vector out = vec::analyze_vector(vec::shuffle_merge(users), p, 5, 3);
  const double shift =
      p.p * static_cast<double>(p.b) * 5.0 / p.g + 5.0;
  for (int k = 0; k < 3; ++k) {
    const double lattice = (out[k] + shift) * p.g;
    CHECK(std::abs(lattice - std::round(lattice)) < 1e-9);
  }
}

TEST_CASE("unbiasedness and the variance bound (light Monte Carlo)") {
  const int d = 2;
  const int batch = 20;
  vec::VecParams p = small_params(64, 256, batch);
  Rng data_rng(10);
  std::vector<Vector> xs;
  Vector true_sum = Vector::Zero(d);
  for (int i = 0; i < batch; ++i) {
    Vector x(d);
    for (int k = 0; k < d; ++k) x[k] = data_rng.uniform() * 2.0 - 1.0;
    xs.push_back(x);
    true_sum += x;
  }
  Rng rng(11);
  const int reps = 2000;
  Vector mean = Vector::Zero(d);
  Vector m2 = Vector::Zero(d);
  for (int r = 0; r < reps; ++r) {
    std::vector<std::vector<vec::LabeledBitCount>> users;
    for (int i = 0; i < batch; ++i)
      users.push_back(vec::randomize_vector(xs[i], p, rng));
    const Vector out = vec::analyze_vector(vec::shuffle_merge(users), p, batch, d);
    mean += out;
    m2 += out.cwiseProduct(out);
  }
  const double bound =
      std::sqrt(batch / 4.0 + batch * static_cast<double>(p.b) / 4.0) / p.g;
  for (int k = 0; k < d; ++k) {
    const double m = mean[k] / reps;
    const double sd = std::sqrt(m2[k] / reps - m * m);
    CHECK(std::abs(m - true_sum[k]) < 4.0 * bound / std::sqrt(reps));
    CHECK(sd <= 1.1 * bound);
  }
}

TEST_CASE("protocol sigma_total matches the per-batch variance bound") {
  vec::VecParams p = small_params(10, 100, 20);
  vec::VecProtocol protocol(3, p);
  const double per_batch_var = (20.0 / 4.0 + 20.0 * 100.0 / 4.0) / 100.0;
  CHECK(protocol.sigma_total(400) ==
        doctest::Approx(std::sqrt(20.0 * per_batch_var)));
}
