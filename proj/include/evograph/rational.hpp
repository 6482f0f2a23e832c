#pragma once

// Exact arithmetic used across the library.
//
// Rational is a small normalized fraction over int64 with overflow-checked
// operations; it stores edge weights. BigRational (GMP) backs the
// closed-form sums and recursions whose intermediates outgrow 64 bits.

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace evograph {

class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;  // "p/q", or "p" when q == 1

  // Accepts "p/q" or an integer. Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  Rational& operator+=(Rational o) { return *this = *this + o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(Rational a, Rational b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

using BigRational = mpq_class;

// Exact value of a finite double (every double is a dyadic rational).
BigRational exact_rational(double value);
BigRational to_big(const Rational& value);

// Binomial coefficient with the conventions the train-length sum relies on:
// C(n, k) = 0 for k < 0, C(n, 0) = 1 for every integer n (negative n too),
// C(n, k) = 0 for 0 <= n < k. Throws std::domain_error for n < 0 < k.
mpz_class binomial(long n, long k);

}  // namespace evograph
