#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace evograph::closedform {

// Unstructured Moran fixation probability (1 - 1/r)/(1 - 1/r^N). Exactly 1/N
// at r = 1; N may be +infinity. Requires r > 0, N >= 1.
double moran_fixation(double r, double N);
// Natural log of moran_fixation, finite even where the value underflows.
double log_moran_fixation(double r, double N);

// Star approximation: Moran fixation with fitness r^2.
double star_fixation_approx(double r, double N);

// Historical superstar estimate with k = H + 2 (Moran fixation with fitness
// r^k). Known to be wrong for H >= 3; kept for comparison only.
double claimed_superstar_fixation(double r, double N, int H);
inline constexpr const char* kClaimedFormulaNote = "invalidated for H >= 3";

// Upper bound for H = 3 in the infinite-population limit: 1 - (1+r)/(2r^5+r+1).
double diaz_upper_bound_h3(double r);

// Probability of reaching two reservoir mutants before losing the first:
// r^4 T / (1 + r^4 T). Requires r > 1, H >= 2.
double reservoir_growth_bias(double r, int H);

struct AsymptoticBounds {
  double T = 0.0;
  double lower = 0.0;        // 1 - 1/(r^4 T)
  double upper = 0.0;        // 1 - 1/(1 + r^4 T)
  double loose_lower = 0.0;  // T replaced by (H-1)(1-1/r)^2
  double loose_upper = 0.0;  // T replaced by H
};

// Requires r > 1, H >= 2 (std::invalid_argument otherwise).
AsymptoticBounds asymptotic_superstar_bounds(double r, int H);

struct ErrorLedger {
  double e0 = 0.0;        // initial mutant outside the reservoirs
  double e1 = 0.0;        // top-of-stem occupancy correction
  double e2 = 0.0;        // initial mutant replaced before its first offspring lands
  double e3 = 0.0;        // train collisions
  double e4_minus = 0.0;  // root competition, lower side
  double e4_plus = 0.0;   // root competition, upper side
  double e5 = 0.0;        // martingale truncation (may underflow; see e5_log10)
  std::optional<double> e5_log10;  // absent when e5 <= 0
  double gamma = 0.0;     // forward bias of the reservoir walk
  bool valid = false;     // gamma > 1 and e1, e3, e4_minus < 1
};

// delta >= 1 threshold of the reservoir walk; T is the expected train length.
ErrorLedger error_ledger(double r, double B, double L, int H, std::int64_t delta, double T);
ErrorLedger error_ledger(double r, double B, double L, int H, std::int64_t delta);

// floor(sqrt(B)), i.e. the integer with sqrt(B) - 1 < delta <= sqrt(B).
std::int64_t default_delta(std::int64_t B);

struct FiniteBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool valid = false;  // false when gamma <= 1; bounds are then meaningless
};

FiniteBounds finite_superstar_bounds(double r, double B, double L, int H, std::int64_t delta,
                                     double T, const ErrorLedger& ledger);
FiniteBounds finite_superstar_bounds(double r, double B, double L, int H, std::int64_t delta);

// Random walk on 0..capacity with forward bias gamma below delta and no bias
// from delta on. q() is the martingale making Q(X_t) fair.
class MartingaleSpec {
 public:
  // Requires gamma > 1, 1 <= delta < capacity.
  MartingaleSpec(double gamma, std::int64_t delta, double capacity);

  double gamma() const { return gamma_; }
  std::int64_t delta() const { return delta_; }
  double capacity() const { return capacity_; }

  double q(double k) const;
  // (Q(1) - Q(0)) / (Q(capacity) - Q(0)), computed from q() directly.
  double absorption_via_q() const;

 private:
  double gamma_;
  std::int64_t delta_;
  double capacity_;
};

// (1 - 1/gamma) / (1 + e5), e5 = gamma^-delta ((gamma - 1)(capacity - delta) - 1).
double martingale_absorption(double gamma, std::int64_t delta, double capacity);
// e5 in log10, or nullopt when e5 <= 0.
std::optional<double> martingale_error_log10(double gamma, std::int64_t delta, double capacity);
double martingale_error(double gamma, std::int64_t delta, double capacity);

struct DeleteriousBound {
  double resident_fitness = 0.0;  // 1/r
  double T_resident = 0.0;
  double gamma = 0.0;             // bias in favour of residents, (1/r)^4 T_resident
  double log10_bound = 0.0;       // (1 - delta) log10 gamma
  double bound = 0.0;             // gamma^(1-delta); may underflow to 0
  double log10_tight = 0.0;       // gamma^-delta (gamma-1) / (1 + e5), with capacity B*L
  std::string note;
};

// Requires 0 < r < 1 and delta >= 1. Error terms are taken in their
// B = L -> infinity limit.
DeleteriousBound deleterious_upper_bound(double r, double B, double L, int H, std::int64_t delta);

struct BoundsReport {
  double r = 0.0;
  int B = 0, L = 0, H = 0;
  std::int64_t delta = 0;
  double T = 0.0;
  ErrorLedger ledger;
  FiniteBounds finite;
  AsymptoticBounds asymptotic;
};

// Full report for a beneficial mutant (r > 1). delta defaults to floor(sqrt(B)).
BoundsReport bounds_report(double r, int B, int L, int H, std::optional<std::int64_t> delta = {});

}  // namespace evograph::closedform
