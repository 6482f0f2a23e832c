#include <doctest.h>

#include <cmath>
#include <functional>

#include "evograph/trainkinetics.hpp"

using namespace evograph;
using namespace evograph::train;

namespace {

// Sums probability * length over every explicit move sequence of the
// condensed walk, grouped by (front moves, tail moves, final length).
BigRational enumerate_paths(const BigRational& r, int H) {
  const BigRational front = r / (1 + r);
  const BigRational tail = 1 / (1 + r);
  BigRational total(0);
  std::function<void(int, int, BigRational)> walk = [&](int a, int z, BigRational p) {
    if (z >= a) return;
    if (a == H) {
      total += p * (a - z);
      return;
    }
    walk(a + 1, z, p * front);
    walk(a, z + 1, p * tail);
  };
  walk(2, 1, BigRational(1));
  return total;
}

// Lattice paths from (2,1) to the first arrival at front = H with tail z,
// never letting the tail reach the front.
long count_paths(int H, int z_end) {
  std::function<long(int, int)> count = [&](int a, int z) -> long {
    if (z >= a) return 0;
    if (a == H) return z == z_end ? 1 : 0;
    return count(a + 1, z) + count(a, z + 1);
  };
  return count(2, 1);
}

}  // namespace

TEST_SUITE("trainkinetics") {
  TEST_CASE("closed values") {
    CHECK(expected_train_length_exact(BigRational(2), 3) == BigRational(4, 3));
    CHECK(expected_train_length(2.0, 3) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    for (double r : {0.5, 1.0, 2.0, 7.0}) CHECK(expected_train_length(r, 2) == 1.0);
    // Three-node stem in general: 2r/(1+r).
    for (double r : {1.1, 1.5, 2.0, 5.0}) CHECK(expected_train_length(r, 3) == doctest::Approx(2 * r / (1 + r)));
    CHECK(expected_train_length(2.0, 50) == doctest::Approx(13.249953106777479).epsilon(1e-13));
  }

  TEST_CASE("reflection-principle path counts") {
    for (int H = 3; H <= 12; ++H) {
      for (int z = 1; z <= H - 1; ++z) {
        const long n = H - 4 + z;
        const mpz_class formula = binomial(n, z - 1) - binomial(n, z - 2);
        CHECK(formula == count_paths(H, z));
      }
    }
  }

  TEST_CASE("sum equals explicit path enumeration") {
    for (const BigRational& r : {BigRational(11, 10), BigRational(3, 2), BigRational(2), BigRational(5),
                                 BigRational(1, 3)}) {
      for (int H = 2; H <= 12; ++H) CHECK(expected_train_length_exact(r, H) == enumerate_paths(r, H));
    }
  }

  TEST_CASE("sum equals the grid dynamic program exactly") {
    for (const BigRational& r : {BigRational(11, 10), BigRational(2), BigRational(7, 3)}) {
      for (int H = 2; H <= 25; ++H) CHECK(expected_train_length_exact(r, H) == train_dp_oracle_exact(r, H));
    }
  }

  TEST_CASE("log-space evaluation agrees with the exact sum") {
    for (double r : {1.1, 2.0, 5.0}) {
      for (int H : {2, 3, 10, 60, 150, 200}) {
        const double exact = expected_train_length(r, H);
        CHECK(expected_train_length_logspace(r, H) == doctest::Approx(exact).epsilon(1e-11));
      }
    }
    // Beyond the exact limit the value stays finite and inside the bounds.
    const double t = expected_train_length(2.0, 1000);
    const auto b = train_length_bounds(2.0, 1000);
    CHECK(t > b.lower);
    CHECK(t < b.upper);
    CHECK(t == doctest::Approx(train_dp_oracle(2.0, 1000)).epsilon(1e-9));
  }

  TEST_CASE("bounds bracket T") {
    for (double r : {1.1, 1.5, 2.0, 5.0}) {
      for (int H = 2; H <= 60; ++H) {
        const auto b = train_length_bounds(r, H);
        const double t = expected_train_length(r, H);
        CHECK(t >= b.lower);
        CHECK(t <= b.upper);
      }
    }
    CHECK_THROWS_AS(train_length_bounds(1.0, 5), std::invalid_argument);
  }

  TEST_CASE("argument errors") {
    CHECK_THROWS_AS(expected_train_length(2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(expected_train_length(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(train_dp_oracle(-1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(collision_probability_bound(2.0, 0.0, 5.0), std::invalid_argument);
  }

  TEST_CASE("stochastic trains agree with T and do not depend on the kernel") {
    for (int H : {3, 10, 50}) {
      const auto s = simulate_train(2.0, H, 99, 200000, kernels::Isa::Scalar);
      const double t = expected_train_length(2.0, H);
      CHECK(std::fabs(s.mean - t) < 4.0 * s.std_error);
      if (kernels::isa_available(kernels::Isa::Avx2)) {
        const auto v = simulate_train(2.0, H, 99, 200000, kernels::Isa::Avx2);
        CHECK(v.length_sum == s.length_sum);
        CHECK(v.length_sq_sum == s.length_sq_sum);
        CHECK(v.extinct == s.extinct);
      }
    }
  }

  TEST_CASE("collision bound") {
    CHECK(collision_probability_bound(2.0, 5000.0, 50.0) == doctest::Approx(200.0 / 5005.0));
  }
}
