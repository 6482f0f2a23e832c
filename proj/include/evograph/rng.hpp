#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

#include "evograph/kernels.hpp"

namespace evograph {

// Counter-based random stream (Philox4x32-10). The 64-bit seed is the key;
// the stream id occupies the upper counter words, so (seed, stream) pairs are
// independent and any block can be regenerated without replaying history.
// Replica i of a run uses Rng(seed + i).
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view kName = "philox4x32-10";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream),
        seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  std::uint32_t next_u32() {
    if (pos_ == buffer_.size()) refill();
    return buffer_[pos_++];
  }
  result_type operator()() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform in (0, 1]; safe for log().
  double uniform_open_zero() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

  // Unbiased integer in [0, n), n >= 1 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Number of failures before the first success of a Bernoulli(p) sequence.
  std::uint64_t geometric_failures(double p) {
    if (p >= 1.0) return 0;
    const double k = std::floor(std::log(uniform_open_zero()) / std::log1p(-p));
    return k >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(k);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill() {
    kernels::philox_fill(kernels::active_isa(), key_, block_, static_cast<std::uint32_t>(stream_),
                         static_cast<std::uint32_t>(stream_ >> 32), buffer_);
    block_ += buffer_.size() / 4;
    pos_ = 0;
  }

  kernels::PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t seed_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 256> buffer_{};
  std::size_t pos_ = buffer_.size();
};

}  // namespace evograph
