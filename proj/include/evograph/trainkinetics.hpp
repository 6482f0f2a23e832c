#pragma once

// Trains of mutants moving down a superstar stem.
//
// A train is summarised by its front position A and the position Z of the
// resident directly behind it (length A - Z). In the condensed process every
// event either advances the front (probability r/(1+r)) or the tail
// (probability 1/(1+r)); a train starts at (2, 1) and is observed when the
// front first reaches the stem end H. Extinct trains count as length 0.

#include <cstdint>

#include "evograph/kernels.hpp"
#include "evograph/rational.hpp"

namespace evograph::train {

struct TrainState {
  int front = 2;  // A
  int tail = 1;   // Z

  int length() const { return tail < front ? front - tail : 0; }
  bool alive() const { return tail < front; }
};

struct StepBias {
  double tail;   // alpha = 1/(1+r)
  double front;  // 1 - alpha = r/(1+r)

  explicit StepBias(double r) : tail(1.0 / (1.0 + r)), front(r / (1.0 + r)) {}
};

// Above this stem length expected_train_length switches to log space.
inline constexpr int kExactTrainLengthLimit = 200;
// Above this stem length train_dp_oracle propagates long doubles.
inline constexpr int kExactDpLimit = 30;

// Reflection-principle sum for the expected train length, evaluated exactly.
// Requires r > 0 and H >= 2 (std::invalid_argument otherwise).
BigRational expected_train_length_exact(const BigRational& r, int H);

// Exact (rounded once) for H <= kExactTrainLengthLimit, log-space otherwise.
double expected_train_length(double r, int H);

// Log-sum-exp evaluation of the same sum; relative error ~1e-12 in practice.
double expected_train_length_logspace(double r, int H);

struct TrainLengthBounds {
  double lower;
  double upper;
};

// ((H-1)(1-1/r)^2, H); requires r > 1 and H >= 2.
TrainLengthBounds train_length_bounds(double r, int H);

// Direct absorbing dynamic program over the (A, Z) grid; an oracle for the
// reflection-principle sum that shares none of its combinatorics.
BigRational train_dp_oracle_exact(const BigRational& r, int H);
// Exact rationals for H <= kExactDpLimit, long double propagation above.
double train_dp_oracle(double r, int H);

struct TrainSimulation {
  std::uint64_t runs = 0;
  std::uint64_t length_sum = 0;
  std::uint64_t length_sq_sum = 0;
  std::uint64_t extinct = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;  // 95% normal interval
  double ci_hi = 0.0;
};

// Independent condensed-process trains; train i draws from the Philox stream
// keyed by `seed` at counter index i. The result is independent of the kernel
// variant. The front/tail split is quantized to 2^-32.
TrainSimulation simulate_train(double r, int H, std::uint64_t seed, std::uint64_t runs,
                               kernels::Isa isa = kernels::active_isa());

// Upper bound on the chance a second train launches while the stem is still
// occupied: H r^2 / (L + r - 1 + r^2).
double collision_probability_bound(double r, double L, double H);

}  // namespace evograph::train
