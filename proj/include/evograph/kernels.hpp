#pragma once

// Data-parallel kernels with a scalar reference and an AVX2 variant.
//
// Every variant must produce bit-identical output to the scalar one for the
// same inputs; tests/kernels_test.cpp enforces this. The variant is picked
// once at runtime from the CPU's features, and EVOGRAPH_SIMD=scalar|avx2
// overrides the choice.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace evograph::kernels {

enum class Isa { Scalar, Avx2 };

bool isa_available(Isa isa);
Isa active_isa();
std::string_view isa_name(Isa isa);

struct PhiloxKey {
  std::uint32_t k0 = 0;
  std::uint32_t k1 = 0;
};
using PhiloxBlock = std::array<std::uint32_t, 4>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// Philox4x32 with 10 rounds (Salmon et al., SC'11).
constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key.k0 += kPhiloxW0;
      key.k1 += kPhiloxW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key.k0, static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key.k1, static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

// Writes out.size()/4 consecutive Philox blocks. Block b uses the counter
// {lo32(first_block + b), hi32(first_block + b), stream0, stream1}.
// out.size() must be a multiple of 4.
void philox_fill(Isa isa, PhiloxKey key, std::uint64_t first_block, std::uint32_t stream0,
                 std::uint32_t stream1, std::span<std::uint32_t> out);

// Condensed train walk: front at 2, tail at 1; each event moves the tail with
// probability tail_threshold / 2^32, otherwise the front. A walk stops when the
// front reaches the stem end (length front - tail) or the tail catches the
// front (length 0). Draw k of train i is word k%4 of the Philox block with
// counter {k/4, 0, lo32(i), hi32(i)}, so each train's outcome depends only on
// its index and the key.
struct TrainWalkParams {
  std::uint32_t stem_length = 2;     // H >= 2
  std::uint32_t tail_threshold = 0;  // round(2^32 / (1 + r))
  PhiloxKey key;
};

void train_walks(Isa isa, const TrainWalkParams& params, std::uint64_t first_train,
                 std::span<std::uint32_t> lengths_out);

namespace scalar {
void philox_fill(PhiloxKey key, std::uint64_t first_block, std::uint32_t stream0,
                 std::uint32_t stream1, std::span<std::uint32_t> out);
void train_walks(const TrainWalkParams& params, std::uint64_t first_train,
                 std::span<std::uint32_t> lengths_out);
}  // namespace scalar

namespace avx2 {
void philox_fill(PhiloxKey key, std::uint64_t first_block, std::uint32_t stream0,
                 std::uint32_t stream1, std::span<std::uint32_t> out);
void train_walks(const TrainWalkParams& params, std::uint64_t first_train,
                 std::span<std::uint32_t> lengths_out);
}  // namespace avx2

}  // namespace evograph::kernels
