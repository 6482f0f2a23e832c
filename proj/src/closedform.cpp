#include "evograph/closedform.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "evograph/rootchain.hpp"
#include "evograph/trainkinetics.hpp"

namespace evograph::closedform {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log|expm1(y)|, accurate for small |y| and finite for large y.
double log_abs_expm1(double y) {
  if (y > 30.0) return y + std::log1p(-std::exp(-y));
  return std::log(std::fabs(std::expm1(y)));
}

void require_fitness(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("fitness must be finite and > 0");
}

}  // namespace

double moran_fixation(double r, double N) {
  require_fitness(r);
  if (!(N >= 1.0)) throw std::invalid_argument("population size must be >= 1");
  if (r == 1.0) return std::isinf(N) ? 0.0 : 1.0 / N;
  if (std::isinf(N)) return r > 1.0 ? 1.0 - 1.0 / r : 0.0;
  const double x = -std::log(r);
  // (1 - e^x) / (1 - e^{N x}); both factors share a sign.
  const double nx = N * x;
  if (nx < 700.0) return std::expm1(x) / std::expm1(nx);
  return std::exp(log_moran_fixation(r, N));
}

double log_moran_fixation(double r, double N) {
  require_fitness(r);
  if (!(N >= 1.0)) throw std::invalid_argument("population size must be >= 1");
  if (r == 1.0) return std::isinf(N) ? -kInf : -std::log(N);
  if (std::isinf(N)) return r > 1.0 ? std::log1p(-1.0 / r) : -kInf;
  const double x = -std::log(r);
  return log_abs_expm1(x) - log_abs_expm1(N * x);
}

double star_fixation_approx(double r, double N) {
  require_fitness(r);
  if (!(N >= 2.0)) throw std::invalid_argument("star needs N >= 2");
  return moran_fixation(r * r, N);
}

double claimed_superstar_fixation(double r, double N, int H) {
  require_fitness(r);
  if (H < 2) throw std::invalid_argument("superstar needs H >= 2");
  return moran_fixation(std::pow(r, H + 2), N);
}

double diaz_upper_bound_h3(double r) {
  require_fitness(r);
  return 1.0 - (1.0 + r) / (2.0 * std::pow(r, 5) + r + 1.0);
}

double reservoir_growth_bias(double r, int H) {
  if (!(r > 1.0)) throw std::invalid_argument("reservoir growth bias needs r > 1");
  const double x = std::pow(r, 4) * train::expected_train_length(r, H);
  return x / (1.0 + x);
}

AsymptoticBounds asymptotic_superstar_bounds(double r, int H) {
  if (!(r > 1.0)) throw std::invalid_argument("asymptotic bounds need r > 1; use the deleterious bound");
  AsymptoticBounds b;
  b.T = train::expected_train_length(r, H);
  const double r4 = std::pow(r, 4);
  b.lower = 1.0 - 1.0 / (r4 * b.T);
  b.upper = 1.0 - 1.0 / (1.0 + r4 * b.T);
  const auto tb = train::train_length_bounds(r, H);
  b.loose_lower = 1.0 - 1.0 / (r4 * tb.lower);
  b.loose_upper = 1.0 - 1.0 / (1.0 + r4 * tb.upper);
  return b;
}

std::int64_t default_delta(std::int64_t B) {
  if (B < 1) throw std::invalid_argument("default delta needs B >= 1");
  auto d = static_cast<std::int64_t>(std::sqrt(static_cast<double>(B)));
  while (d * d > B) --d;
  while ((d + 1) * (d + 1) <= B) ++d;
  return d;
}

double martingale_error(double gamma, std::int64_t delta, double capacity) {
  const double bracket = (gamma - 1.0) * (capacity - static_cast<double>(delta)) - 1.0;
  if (bracket <= 0.0) return std::pow(gamma, -static_cast<double>(delta)) * bracket;
  return std::exp(-static_cast<double>(delta) * std::log(gamma) + std::log(bracket));
}

std::optional<double> martingale_error_log10(double gamma, std::int64_t delta, double capacity) {
  const double bracket = (gamma - 1.0) * (capacity - static_cast<double>(delta)) - 1.0;
  if (!(bracket > 0.0) || !(gamma > 0.0)) return std::nullopt;
  return -static_cast<double>(delta) * std::log10(gamma) + std::log10(bracket);
}

ErrorLedger error_ledger(double r, double B, double L, int H, std::int64_t delta, double T) {
  require_fitness(r);
  if (!(B >= 1.0) || !(L >= 1.0)) throw std::invalid_argument("error ledger needs B, L >= 1");
  if (H < 2) throw std::invalid_argument("error ledger needs H >= 2");
  if (delta < 1) throw std::invalid_argument("delta must be a positive integer");
  ErrorLedger e;
  const double Hd = H;
  e.e0 = (1.0 + Hd * B) / (B * L + 1.0 + Hd * B);
  e.e1 = (r - 1.0) / (L + r - 1.0);
  e.e2 = 1.0 / (1.0 + B * L * L);
  e.e3 = train::collision_probability_bound(r, L, Hd);
  e.e4_minus = rootchain::epsilon4_minus(B, r, Hd, static_cast<double>(delta));
  e.e4_plus = rootchain::epsilon4_plus(B, r, Hd);
  e.gamma = std::pow(r, 4) * T * (1.0 - e.e1) * (1.0 - e.e3) * (1.0 - e.e4_minus) - e.e2;
  // Each (1 - eps) factor must be a probability, otherwise gamma is meaningless.
  e.valid = e.e1 < 1.0 && e.e3 < 1.0 && e.e4_minus < 1.0 && e.gamma > 1.0;
  if (e.valid) {
    e.e5 = martingale_error(e.gamma, delta, B * L);
    e.e5_log10 = martingale_error_log10(e.gamma, delta, B * L);
  } else {
    e.e5 = std::numeric_limits<double>::quiet_NaN();
  }
  return e;
}

ErrorLedger error_ledger(double r, double B, double L, int H, std::int64_t delta) {
  return error_ledger(r, B, L, H, delta, train::expected_train_length(r, H));
}

FiniteBounds finite_superstar_bounds(double r, double B, double L, int H, std::int64_t delta,
                                     double T, const ErrorLedger& e) {
  (void)L;
  (void)H;
  (void)delta;
  FiniteBounds out;
  out.valid = e.valid;
  const double r4 = std::pow(r, 4);
  out.upper = 1.0 - (B - 1.0) / ((B + r - 1.0) * T * r4 * (1.0 + e.e4_plus) + B - 1.0);
  if (e.valid) {
    out.lower = (1.0 - e.e0) / (1.0 + e.e5) * (1.0 - 1.0 / e.gamma);
  } else {
    out.lower = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

FiniteBounds finite_superstar_bounds(double r, double B, double L, int H, std::int64_t delta) {
  const double T = train::expected_train_length(r, H);
  return finite_superstar_bounds(r, B, L, H, delta, T, error_ledger(r, B, L, H, delta, T));
}

MartingaleSpec::MartingaleSpec(double gamma, std::int64_t delta, double capacity)
    : gamma_(gamma), delta_(delta), capacity_(capacity) {
  if (!(gamma > 1.0)) throw std::invalid_argument("martingale needs gamma > 1");
  if (delta < 1 || !(static_cast<double>(delta) < capacity)) {
    throw std::invalid_argument("martingale needs 1 <= delta < capacity");
  }
}

double MartingaleSpec::q(double k) const {
  const double d = static_cast<double>(delta_);
  if (k < d) return std::pow(gamma_, -k);
  const double scale = std::pow(gamma_, -d);
  const double slope = scale * (1.0 - gamma_);
  const double offset = scale * (1.0 - d * (1.0 - gamma_));
  return slope * k + offset;
}

double MartingaleSpec::absorption_via_q() const {
  return (q(1.0) - q(0.0)) / (q(capacity_) - q(0.0));
}

double martingale_absorption(double gamma, std::int64_t delta, double capacity) {
  MartingaleSpec spec(gamma, delta, capacity);
  return (1.0 - 1.0 / gamma) / (1.0 + martingale_error(gamma, delta, capacity));
}

DeleteriousBound deleterious_upper_bound(double r, double B, double L, int H, std::int64_t delta) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("deleterious bound needs 0 < r < 1");
  if (delta < 1) throw std::invalid_argument("delta must be a positive integer");
  DeleteriousBound out;
  out.resident_fitness = 1.0 / r;
  out.T_resident = train::expected_train_length(out.resident_fitness, H);
  out.gamma = std::pow(out.resident_fitness, 4) * out.T_resident;
  const double d = static_cast<double>(delta);
  out.log10_bound = (1.0 - d) * std::log10(out.gamma);
  out.bound = std::pow(10.0, out.log10_bound);
  const double capacity = B * L;
  const double e5 = martingale_error(out.gamma, delta, capacity);
  out.log10_tight = -d * std::log10(out.gamma) + std::log10(out.gamma - 1.0) - std::log10(1.0 + e5);
  out.note = "error terms for resident trains taken in the B = L -> infinity limit";
  return out;
}

BoundsReport bounds_report(double r, int B, int L, int H, std::optional<std::int64_t> delta) {
  if (!(r > 1.0)) throw std::invalid_argument("bounds report needs r > 1");
  if (B < 1 || L < 1) throw std::invalid_argument("bounds report needs B, L >= 1");
  BoundsReport rep;
  rep.r = r;
  rep.B = B;
  rep.L = L;
  rep.H = H;
  rep.delta = delta.value_or(default_delta(B));
  rep.asymptotic = asymptotic_superstar_bounds(r, H);
  rep.T = rep.asymptotic.T;
  rep.ledger = error_ledger(r, B, L, H, rep.delta, rep.T);
  rep.finite = finite_superstar_bounds(r, B, L, H, rep.delta, rep.T, rep.ledger);
  return rep;
}

}  // namespace evograph::closedform
