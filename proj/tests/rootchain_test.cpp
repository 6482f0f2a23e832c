#include <doctest.h>

#include "evograph/rootchain.hpp"

using namespace evograph;
using namespace evograph::rootchain;

namespace {

struct Pair {
  BigRational up, down;
};

// Solves a11 u + a12 d = b1, a21 u + a22 d = b2 by Cramer's rule.
Pair cramer(const BigRational& a11, const BigRational& a12, const BigRational& a21,
            const BigRational& a22, const BigRational& b1, const BigRational& b2) {
  const BigRational det = a11 * a22 - a12 * a21;
  return {(b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det};
}

// Balance equations of the chain, written out per length:
//   (B + r + c) u_i - (B - 1 + c) d_i = r (B - delta)/B + u_{i-1}
//   -r u_i + (r + 1) d_i = d_{i-1}
// with c = delta (r - 1).
std::vector<Pair> oracle(int B, const BigRational& r, int l, int delta) {
  const BigRational b(B), c = BigRational(delta) * (r - 1);
  std::vector<Pair> out{{r / (b + r), BigRational(0)}};
  for (int i = 1; i <= l; ++i) {
    const Pair& prev = out.back();
    out.push_back(cramer(b + r + c, -(b - 1 + c), -r, r + 1, r * (b - delta) / b + prev.up, prev.down));
  }
  return out;
}

}  // namespace

TEST_SUITE("rootchain") {
  TEST_CASE("recursion matches the balance equations exactly") {
    for (int B : {2, 3, 10, 57}) {
      for (const BigRational& r : {BigRational(1, 2), BigRational(1), BigRational(3, 2), BigRational(4)}) {
        const auto sol = solve_root_chain(B, r, 12);
        const auto ref = oracle(B, r, 12, 0);
        REQUIRE(sol.p_up.size() == 13);
        for (int i = 0; i <= 12; ++i) {
          CHECK(sol.p_up[i] == ref[i].up);
          CHECK(sol.p_down[i] == ref[i].down);
        }
        for (int delta : {0, 1, B - 1}) {
          const auto comp = solve_root_chain_competing(B, r, 12, delta);
          const auto cref = oracle(B, r, 12, delta);
          for (int i = 0; i <= 12; ++i) {
            CHECK(comp.p_up[i] == cref[i].up);
            CHECK(comp.p_down[i] == cref[i].down);
          }
        }
      }
    }
  }

  TEST_CASE("initial values and monotonicity") {
    const auto sol = solve_root_chain(20, BigRational(2), 30);
    CHECK(sol.p_up[0] == BigRational(1, 11));
    CHECK(sol.p_down[0] == 0);
    for (int i = 1; i <= 30; ++i) {
      CHECK(sol.p_down[i] > sol.p_down[i - 1]);
      CHECK(sol.p_up[i] > sol.p_down[i]);
      CHECK(sol.p_up[i] <= 1);
    }
  }

  TEST_CASE("upper envelope: p_down(l) < l r^2 (1 + e4+) / B for l <= H") {
    for (int B : {50, 200, 1000}) {
      for (const BigRational& r : {BigRational(11, 10), BigRational(2), BigRational(3)}) {
        for (int H : {2, 5, 10}) {
          const auto sol = solve_root_chain(B, r, H);
          const BigRational e4 = epsilon4_plus<BigRational>(BigRational(B), r, BigRational(H));
          for (int l = 1; l <= H; ++l) CHECK(sol.p_down[l] < l * r * r * (1 + e4) / B);
        }
      }
    }
  }

  TEST_CASE("lower envelope with competing branches") {
    for (int B : {100, 1000}) {
      for (const BigRational& r : {BigRational(11, 10), BigRational(2)}) {
        const int H = 5;
        for (int delta : {0, 3, 10}) {
          const auto sol = solve_root_chain_competing(B, r, H, delta);
          const BigRational b(B), denom = b + delta * (r - 1) + r * r + 2 * r;
          for (int l = 1; l <= H; ++l) {
            // Three-term truncation, valid while l (r^2 + r) / denom < 1.
            REQUIRE(l * (r * r + r) < denom);
            const BigRational truncated =
                (b - delta) / b * l * r * r / denom * (1 - BigRational(l - 1, 2) * (r * r + r) / denom);
            CHECK(sol.p_down[l] > truncated);
          }
          // The first-order form, checked where the dropped O(1/B^2) is small.
          if (B == 1000) {
            const BigRational e4 = epsilon4_minus<BigRational>(b, r, BigRational(H), BigRational(delta));
            CHECK(sol.p_down[H] > H * r * r * (1 - e4) / b);
          }
        }
      }
    }
  }

  TEST_CASE("double entry point uses the exact value of r") {
    const auto a = solve_root_chain(7, 1.5, 4);
    const auto b = solve_root_chain(7, BigRational(3, 2), 4);
    CHECK(a.p_up == b.p_up);
    CHECK(a.p_down == b.p_down);
  }

  TEST_CASE("reference values") {
    CHECK(solve_root_chain(98, BigRational(2), 0).p_up[0] == BigRational(1, 50));
    CHECK(epsilon4_plus(5000.0, 2.0, 50.0) == doctest::Approx(0.014686).epsilon(1e-4));
    CHECK(epsilon4_plus(100.0, 2.0, 3.0) == doctest::Approx(0.028852).epsilon(1e-4));
    CHECK(epsilon4_minus(5000.0, 2.0, 50.0, 70.0) == doctest::Approx(0.0590));
    CHECK(epsilon4_minus(100.0, 2.0, 3.0, 10.0) == doctest::Approx(0.34));
  }

  TEST_CASE("epsilon helpers") {
    CHECK(epsilon4_plus(10.0, 2.0, 3.0) == doctest::Approx(3.0 / (15.0 * 12.0) + 2.0 * 3.0 / 30.0));
    CHECK(epsilon4_minus(10.0, 2.0, 3.0, 1.0) == doctest::Approx((4.0 + 4.0 + 6.0 + 3.0 * 6.0) / 20.0));
  }

  TEST_CASE("argument errors") {
    CHECK_THROWS_AS(solve_root_chain(1, BigRational(2), 3), std::invalid_argument);
    CHECK_THROWS_AS(solve_root_chain(3, BigRational(0), 3), std::invalid_argument);
    CHECK_THROWS_AS(solve_root_chain(3, BigRational(2), -1), std::invalid_argument);
    CHECK_THROWS_AS(solve_root_chain_competing(3, BigRational(2), 3, 3), std::invalid_argument);
  }
}
