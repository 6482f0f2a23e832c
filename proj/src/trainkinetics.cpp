#include "evograph/trainkinetics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace evograph::train {
namespace {

void check_args(double r, int H) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("train length needs finite r > 0");
  if (H < 2) throw std::invalid_argument("train length needs H >= 2");
}

void check_args(const BigRational& r, int H) {
  if (sgn(r) <= 0) throw std::invalid_argument("train length needs r > 0");
  if (H < 2) throw std::invalid_argument("train length needs H >= 2");
}

BigRational power(const BigRational& base, unsigned long e) {
  BigRational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

// Forward propagation of probability mass over the live (A, Z) states,
// A = 2..H-1, Z = 1..A-1, in topological order (A, then Z).
template <class Scalar>
Scalar propagate(const Scalar& front_p, const Scalar& tail_p, int H) {
  if (H == 2) return Scalar(1);
  std::vector<std::vector<Scalar>> mass(H + 1);
  for (int a = 2; a <= H; ++a) mass[a].assign(a, Scalar(0));
  mass[2][1] = Scalar(1);
  Scalar expected(0);
  for (int a = 2; a < H; ++a) {
    for (int z = 1; z < a; ++z) {
      const Scalar m = mass[a][z];
      if (m == Scalar(0)) continue;
      const Scalar forward = m * front_p;
      if (a + 1 == H) {
        expected += forward * Scalar(H - z);
      } else {
        mass[a + 1][z] += forward;
      }
      if (z + 1 < a) mass[a][z + 1] += m * tail_p;
    }
  }
  return expected;
}

}  // namespace

BigRational expected_train_length_exact(const BigRational& r, int H) {
  check_args(r, H);
  const BigRational alpha = BigRational(1) / (BigRational(1) + r);
  const BigRational beta = BigRational(1) - alpha;
  BigRational sum(0);
  BigRational alpha_pow(1);  // alpha^(z-1)
  for (int z = 1; z <= H - 1; ++z) {
    const long n = H - 4 + z;
    const mpz_class paths = binomial(n, z - 1) - binomial(n, z - 2);
    sum += BigRational(mpz_class(H - z) * paths) * alpha_pow;
    alpha_pow *= alpha;
  }
  BigRational t = power(beta, static_cast<unsigned long>(H - 2)) * sum;
  t.canonicalize();
  return t;
}

double expected_train_length(double r, int H) {
  check_args(r, H);
  if (H > kExactTrainLengthLimit) return expected_train_length_logspace(r, H);
  return expected_train_length_exact(exact_rational(r), H).get_d();
}

double expected_train_length_logspace(double r, int H) {
  check_args(r, H);
  if (H == 2) return 1.0;
  const double log_alpha = -std::log1p(r);
  const double log_beta = std::log(r) - std::log1p(r);
  // Valid-path count: C(n, z-1) - C(n, z-2) = C(n, z-1) (H-1-z)/(H-2), n = H-4+z.
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(H));
  for (int z = 1; z <= H - 2; ++z) {
    const double n = H - 4 + z;
    const double k = z - 1;
    const double log_binom = std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
    logs.push_back(std::log(static_cast<double>(H - z)) + k * log_alpha + log_binom +
                   std::log(static_cast<double>(H - 1 - z)) - std::log(static_cast<double>(H - 2)));
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : logs) peak = std::max(peak, v);
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - peak);
  return std::exp((H - 2) * log_beta + peak + std::log(acc));
}

TrainLengthBounds train_length_bounds(double r, int H) {
  check_args(r, H);
  if (!(r > 1.0)) throw std::invalid_argument("train length bounds need r > 1");
  const double gap = 1.0 - 1.0 / r;
  return {(H - 1) * gap * gap, static_cast<double>(H)};
}

BigRational train_dp_oracle_exact(const BigRational& r, int H) {
  check_args(r, H);
  const BigRational front = r / (BigRational(1) + r);
  const BigRational tail = BigRational(1) / (BigRational(1) + r);
  BigRational t = propagate<BigRational>(front, tail, H);
  t.canonicalize();
  return t;
}

double train_dp_oracle(double r, int H) {
  check_args(r, H);
  if (H <= kExactDpLimit) return train_dp_oracle_exact(exact_rational(r), H).get_d();
  const long double rl = r;
  return static_cast<double>(propagate<long double>(rl / (1.0L + rl), 1.0L / (1.0L + rl), H));
}

TrainSimulation simulate_train(double r, int H, std::uint64_t seed, std::uint64_t runs,
                               kernels::Isa isa) {
  check_args(r, H);
  if (runs < 1) throw std::invalid_argument("simulate_train needs runs >= 1");
  const double scaled = std::ldexp(1.0 / (1.0 + r), 32);
  kernels::TrainWalkParams params;
  params.stem_length = static_cast<std::uint32_t>(H);
  params.tail_threshold =
      scaled >= 4294967295.0 ? 0xFFFFFFFFu : static_cast<std::uint32_t>(std::llround(scaled));
  params.key = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};

  TrainSimulation out;
  out.runs = runs;
  std::vector<std::uint32_t> lengths(4096);
  for (std::uint64_t first = 0; first < runs; first += lengths.size()) {
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(lengths.size(), runs - first));
    std::span<std::uint32_t> chunk(lengths.data(), count);
    kernels::train_walks(isa, params, first, chunk);
    for (std::uint32_t len : chunk) {
      out.length_sum += len;
      out.length_sq_sum += static_cast<std::uint64_t>(len) * len;
      out.extinct += len == 0;
    }
  }
  const double n = static_cast<double>(runs);
  out.mean = static_cast<double>(out.length_sum) / n;
  const double var = runs > 1 ? (static_cast<double>(out.length_sq_sum) - n * out.mean * out.mean) / (n - 1) : 0.0;
  out.std_error = std::sqrt(std::max(var, 0.0) / n);
  out.ci_lo = out.mean - 1.959963984540054 * out.std_error;
  out.ci_hi = out.mean + 1.959963984540054 * out.std_error;
  return out;
}

double collision_probability_bound(double r, double L, double H) {
  if (L < 1) throw std::invalid_argument("collision bound needs L >= 1");
  return H * r * r / (L + r - 1.0 + r * r);
}

}  // namespace evograph::train
