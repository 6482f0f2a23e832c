#include <doctest.h>

#include <cmath>
#include <vector>

#include "evograph/closedform.hpp"
#include "evograph/trainkinetics.hpp"

using namespace evograph;
using namespace evograph::closedform;

namespace {

// P(hit capacity before 0 | start at 1) for a walk stepping up with
// probability gamma/(1+gamma) on 1..delta-1 and 1/2 from delta on,
// by a tridiagonal solve of the harmonic equations.
long double walk_absorption(long double gamma, int delta, int capacity) {
  const int n = capacity - 1;  // unknowns h(1..capacity-1)
  std::vector<long double> a(n), b(n), c(n), d(n);
  for (int k = 1; k <= n; ++k) {
    const long double up = k < delta ? gamma / (1 + gamma) : 0.5L;
    a[k - 1] = -(1 - up);
    b[k - 1] = 1;
    c[k - 1] = -up;
    d[k - 1] = k == n ? up : 0;  // h(capacity) = 1, h(0) = 0
  }
  for (int i = 1; i < n; ++i) {
    const long double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    d[i] -= m * d[i - 1];
  }
  std::vector<long double> h(n);
  h[n - 1] = d[n - 1] / b[n - 1];
  for (int i = n - 2; i >= 0; --i) h[i] = (d[i] - c[i] * h[i + 1]) / b[i];
  return h[0];
}

}  // namespace

TEST_SUITE("closedform") {
  TEST_CASE("moran fixation") {
    CHECK(moran_fixation(1.0, 10) == doctest::Approx(0.1));
    CHECK(moran_fixation(2.0, 10) == doctest::Approx(0.5 / (1 - std::pow(2.0, -10))));
    CHECK(moran_fixation(0.5, 10) == doctest::Approx(-1.0 / (1 - 1024.0)));
    CHECK(moran_fixation(2.0, INFINITY) == doctest::Approx(0.5));
    CHECK(moran_fixation(0.5, INFINITY) == 0.0);
    CHECK(moran_fixation(1.0 + 1e-12, 100) == doctest::Approx(0.01).epsilon(1e-9));
    for (double r : {0.5, 0.9, 1.0, 1.1, 3.0}) {
      for (double N : {1.0, 2.0, 7.0, 100.0}) {
        CHECK(std::log(moran_fixation(r, N)) == doctest::Approx(log_moran_fixation(r, N)).epsilon(1e-12));
      }
    }
    // Underflows in value but not in log.
    CHECK(moran_fixation(0.5, 80401) == 0.0);
    CHECK(log_moran_fixation(0.5, 80401) == doctest::Approx(-80401 * std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(moran_fixation(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(moran_fixation(2.0, 0.5), std::invalid_argument);
  }

  TEST_CASE("star and claimed forms") {
    CHECK(star_fixation_approx(1.5, 20) == doctest::Approx(moran_fixation(2.25, 20)));
    for (int H : {2, 3, 5}) {
      const double rk = std::pow(1.3, H + 2);
      CHECK(claimed_superstar_fixation(1.3, 50, H) ==
            doctest::Approx((1 - 1 / rk) / (1 - std::pow(rk, -50))));
    }
  }

  TEST_CASE("claimed H = 3 limit contradicts the Diaz bound for r > 1.42") {
    CHECK(diaz_upper_bound_h3(2.0) == doctest::Approx(1 - 3.0 / 67.0));
    for (int i = 0; i <= 357; ++i) {
      const double r = 1.43 + 0.01 * i;
      CHECK(claimed_superstar_fixation(r, INFINITY, 3) > diaz_upper_bound_h3(r));
    }
    CHECK(claimed_superstar_fixation(1.41, INFINITY, 3) < diaz_upper_bound_h3(1.41));
  }

  TEST_CASE("asymptotic bounds") {
    const auto a = asymptotic_superstar_bounds(2.0, 50);
    CHECK(a.T == doctest::Approx(13.25).epsilon(1e-3));
    CHECK(std::fabs(a.lower - 0.995283) < 1e-6);
    CHECK(std::fabs(a.upper - 0.995306) < 1e-6);
    CHECK(a.loose_lower == doctest::Approx(1 - 1 / (16 * 49 * 0.25)));
    CHECK(a.loose_upper == doctest::Approx(1 - 1 / (1 + 16 * 50.0)));
    CHECK(reservoir_growth_bias(2.0, 50) == doctest::Approx(a.upper));
    // H = 2: T = 1, so the growth bias is r^4 / (1 + r^4) = 16/17 at r = 2.
    CHECK(reservoir_growth_bias(2.0, 2) == doctest::Approx(16.0 / 17.0));
    CHECK_THROWS_AS(asymptotic_superstar_bounds(1.0, 5), std::invalid_argument);
  }

  TEST_CASE("default delta") {
    CHECK(default_delta(5000) == 70);
    CHECK(default_delta(4) == 2);
    CHECK(default_delta(3) == 1);
    CHECK(default_delta(1) == 1);
    for (std::int64_t B : {2, 99, 100, 101, 123456789}) {
      const auto d = default_delta(B);
      CHECK(d * d <= B);
      CHECK((d + 1) * (d + 1) > B);
    }
  }

  TEST_CASE("martingale absorption matches a direct walk solve") {
    for (double gamma : {1.2, 2.0, 5.0}) {
      for (int delta : {1, 2, 5}) {
        for (int cap : {8, 20, 60}) {
          const double direct = static_cast<double>(walk_absorption(gamma, delta, cap));
          CHECK(martingale_absorption(gamma, delta, cap) == doctest::Approx(direct).epsilon(1e-12));
          CHECK(MartingaleSpec(gamma, delta, cap).absorption_via_q() == doctest::Approx(direct).epsilon(1e-10));
        }
      }
    }
  }

  TEST_CASE("martingale q is fair") {
    const MartingaleSpec m(3.0, 4, 30);
    for (int k = 1; k < 29; ++k) {
      const double up = k < 4 ? 0.75 : 0.5;
      CHECK(up * m.q(k + 1) + (1 - up) * m.q(k - 1) == doctest::Approx(m.q(k)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(MartingaleSpec(1.0, 2, 10), std::invalid_argument);
    CHECK_THROWS_AS(MartingaleSpec(2.0, 10, 10), std::invalid_argument);
  }

  TEST_CASE("martingale error in log space") {
    const double e = martingale_error(2.0, 3, 100);
    CHECK(e == doctest::Approx(std::pow(2.0, -3) * (97.0 - 1.0)));
    CHECK(*martingale_error_log10(2.0, 3, 100) == doctest::Approx(std::log10(e)));
    // gamma^-delta underflows; the log form stays finite.
    const auto lg = martingale_error_log10(16.0, 2000, 1e8);
    REQUIRE(lg.has_value());
    CHECK(*lg == doctest::Approx(-2000 * std::log10(16.0) + std::log10(15.0 * (1e8 - 2000) - 1)));
    CHECK(!martingale_error_log10(1.5, 2, 3.5).has_value());  // bracket <= 0
  }

  TEST_CASE("error ledger terms") {
    const double r = 2, B = 5000, L = 5000;
    const int H = 50;
    const auto e = error_ledger(r, B, L, H, 70);
    CHECK(e.e0 == doctest::Approx((1 + 50 * B) / (B * L + 1 + 50 * B)));
    CHECK(e.e1 == doctest::Approx(1 / (L + 1)));
    CHECK(e.e2 == doctest::Approx(1 / (1 + B * L * L)));
    CHECK(e.e3 == doctest::Approx(50 * 4 / (L + 1 + 4)));
    CHECK(e.e4_minus == doctest::Approx((2 * 70 * 2 + 4 + 6 + 50 * 6) / (2 * B)));
    CHECK(e.e4_plus == doctest::Approx(3 / ((B + 5) * (B + 2)) + 49 * 3 / (2 * B + 10)));
    const double T = train::expected_train_length(2.0, 50);
    CHECK(e.gamma == doctest::Approx(16 * T * (1 - e.e1) * (1 - e.e3) * (1 - e.e4_minus) - e.e2));
    CHECK(e.valid);
    CHECK(e.e5 < 1e-15);
  }

  TEST_CASE("finite bounds at B = L = 5000, H = 50, r = 2") {
    const auto f = finite_superstar_bounds(2.0, 5000, 5000, 50, 70);
    REQUIRE(f.valid);
    CHECK(std::fabs(f.upper - 0.995375) < 1e-4);
    CHECK(f.lower < f.upper);
    const auto a = asymptotic_superstar_bounds(2.0, 50);
    CHECK(f.lower < a.lower);
    CHECK(f.upper > a.upper);
  }

  TEST_CASE("finite bounds converge to the asymptotic ones") {
    const auto a = asymptotic_superstar_bounds(3.0, 6);
    const double B = 1e9, L = 1e9;
    const auto f = finite_superstar_bounds(3.0, B, L, 6, default_delta(static_cast<std::int64_t>(B)));
    REQUIRE(f.valid);
    CHECK(f.lower == doctest::Approx(a.lower).epsilon(1e-6));
    CHECK(f.upper == doctest::Approx(a.upper).epsilon(1e-6));
  }

  TEST_CASE("small superstars leave the regime") {
    CHECK(!error_ledger(2.0, 1, 1, 2, 1).valid);
    CHECK(!finite_superstar_bounds(2.0, 1, 1, 2, 1).valid);
    CHECK(std::isnan(finite_superstar_bounds(2.0, 1, 1, 2, 1).lower));
  }

  TEST_CASE("deleterious bound") {
    const auto d = deleterious_upper_bound(0.5, 200, 200, 10, 14);
    CHECK(d.resident_fitness == 2.0);
    CHECK(d.T_resident == doctest::Approx(train::expected_train_length(2.0, 10)));
    CHECK(d.gamma == doctest::Approx(16 * d.T_resident));
    CHECK(d.log10_bound == doctest::Approx(-13 * std::log10(d.gamma)));
    CHECK(d.log10_tight < d.log10_bound);
    CHECK_THROWS_AS(deleterious_upper_bound(1.0, 10, 10, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(deleterious_upper_bound(0.5, 10, 10, 3, 0), std::invalid_argument);
  }

  TEST_CASE("bounds report") {
    const auto rep = bounds_report(2.0, 5000, 5000, 50);
    CHECK(rep.delta == 70);
    CHECK(rep.T == doctest::Approx(13.249953106777));
    CHECK(rep.finite.valid);
    CHECK(rep.asymptotic.upper == doctest::Approx(asymptotic_superstar_bounds(2.0, 50).upper));
  }
}
