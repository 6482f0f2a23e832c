// Compiled with -mavx2; only reached when the CPU reports AVX2.

#include <immintrin.h>

#include <stdexcept>

#include "evograph/kernels.hpp"

namespace evograph::kernels::avx2 {
namespace {

struct Lanes4 {
  __m256i w0, w1, w2, w3;
};

// 32x32 -> 64 multiply of all 8 lanes by a broadcast constant.
inline void mulhilo(__m256i a, __m256i m, __m256i& hi, __m256i& lo) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), _mm256_srli_epi64(m, 32));
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010);
}

// Eight independent Philox4x32-10 blocks in structure-of-arrays form.
inline Lanes4 philox8(Lanes4 c, PhiloxKey key) {
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kPhiloxM1));
  std::uint32_t k0 = key.k0, k1 = key.k1;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    __m256i hi0, lo0, hi1, lo1;
    mulhilo(c.w0, m0, hi0, lo0);
    mulhilo(c.w2, m1, hi1, lo1);
    const __m256i vk0 = _mm256_set1_epi32(static_cast<int>(k0));
    const __m256i vk1 = _mm256_set1_epi32(static_cast<int>(k1));
    c = {_mm256_xor_si256(_mm256_xor_si256(hi1, c.w1), vk0), lo1,
         _mm256_xor_si256(_mm256_xor_si256(hi0, c.w3), vk1), lo0};
  }
  return c;
}

}  // namespace

void philox_fill(PhiloxKey key, std::uint64_t first_block, std::uint32_t stream0,
                 std::uint32_t stream1, std::span<std::uint32_t> out) {
  if (out.size() % 4 != 0) throw std::invalid_argument("philox_fill needs whole blocks");
  const std::size_t blocks = out.size() / 4;
  std::size_t b = 0;
  for (; b + 8 <= blocks; b += 8) {
    const std::uint64_t base = first_block + b;
    alignas(32) std::uint32_t lo[8], hi[8];
    for (int i = 0; i < 8; ++i) {
      const std::uint64_t c = base + static_cast<std::uint64_t>(i);
      lo[i] = static_cast<std::uint32_t>(c);
      hi[i] = static_cast<std::uint32_t>(c >> 32);
    }
    Lanes4 c{_mm256_load_si256(reinterpret_cast<const __m256i*>(lo)),
             _mm256_load_si256(reinterpret_cast<const __m256i*>(hi)),
             _mm256_set1_epi32(static_cast<int>(stream0)),
             _mm256_set1_epi32(static_cast<int>(stream1))};
    c = philox8(c, key);

    // Transpose SoA (word-major) to AoS (block-major).
    const __m256i t0 = _mm256_unpacklo_epi32(c.w0, c.w1);
    const __m256i t1 = _mm256_unpackhi_epi32(c.w0, c.w1);
    const __m256i t2 = _mm256_unpacklo_epi32(c.w2, c.w3);
    const __m256i t3 = _mm256_unpackhi_epi32(c.w2, c.w3);
    const __m256i u0 = _mm256_unpacklo_epi64(t0, t2);
    const __m256i u1 = _mm256_unpackhi_epi64(t0, t2);
    const __m256i u2 = _mm256_unpacklo_epi64(t1, t3);
    const __m256i u3 = _mm256_unpackhi_epi64(t1, t3);
    auto* dst = reinterpret_cast<__m256i*>(out.data() + 4 * b);
    _mm256_storeu_si256(dst + 0, _mm256_permute2x128_si256(u0, u1, 0x20));
    _mm256_storeu_si256(dst + 1, _mm256_permute2x128_si256(u2, u3, 0x20));
    _mm256_storeu_si256(dst + 2, _mm256_permute2x128_si256(u0, u1, 0x31));
    _mm256_storeu_si256(dst + 3, _mm256_permute2x128_si256(u2, u3, 0x31));
  }
  if (b < blocks) {
    scalar::philox_fill(key, first_block + b, stream0, stream1, out.subspan(4 * b));
  }
}

void train_walks(const TrainWalkParams& params, std::uint64_t first_train,
                 std::span<std::uint32_t> lengths_out) {
  constexpr int kLanes = 8;
  const std::size_t total = lengths_out.size();
  if (total == 0) return;

  alignas(32) std::uint32_t front[kLanes], tail[kLanes], block[kLanes], id_lo[kLanes], id_hi[kLanes];
  std::uint64_t slot[kLanes];
  bool busy[kLanes] = {};
  std::size_t next = 0;

  const __m256i vH = _mm256_set1_epi32(static_cast<int>(params.stem_length));
  const __m256i sign = _mm256_set1_epi32(INT32_MIN);
  const __m256i threshold = _mm256_xor_si256(_mm256_set1_epi32(static_cast<int>(params.tail_threshold)), sign);
  const __m256i one = _mm256_set1_epi32(1);

  for (;;) {
    // Lanes are refilled only at block boundaries so every lane consumes the
    // words of its current block in order, exactly as the scalar walk does.
    bool any = false;
    for (int l = 0; l < kLanes; ++l) {
      if (busy[l] && !(front[l] < params.stem_length && tail[l] < front[l])) {
        lengths_out[slot[l]] = tail[l] < front[l] ? front[l] - tail[l] : 0;
        busy[l] = false;
      }
      if (!busy[l] && next < total) {
        const std::uint64_t id = first_train + next;
        slot[l] = next++;
        front[l] = 2;
        tail[l] = 1;
        block[l] = 0;
        id_lo[l] = static_cast<std::uint32_t>(id);
        id_hi[l] = static_cast<std::uint32_t>(id >> 32);
        busy[l] = true;
      }
      if (!busy[l]) {
        // Idle lane: park it in a finished state.
        front[l] = params.stem_length;
        tail[l] = 0;
      }
      any = any || busy[l];
    }
    if (!any) break;

    __m256i vA = _mm256_load_si256(reinterpret_cast<const __m256i*>(front));
    __m256i vZ = _mm256_load_si256(reinterpret_cast<const __m256i*>(tail));
    Lanes4 words = philox8({_mm256_load_si256(reinterpret_cast<const __m256i*>(block)),
                            _mm256_setzero_si256(),
                            _mm256_load_si256(reinterpret_cast<const __m256i*>(id_lo)),
                            _mm256_load_si256(reinterpret_cast<const __m256i*>(id_hi))},
                           params.key);
    const __m256i draws[4] = {words.w0, words.w1, words.w2, words.w3};
    for (const __m256i& u : draws) {
      // live = front < H && tail < front (values are small, signed compare is safe)
      const __m256i live = _mm256_and_si256(_mm256_cmpgt_epi32(vH, vA), _mm256_cmpgt_epi32(vA, vZ));
      // unsigned u < threshold via sign flip
      const __m256i to_tail = _mm256_cmpgt_epi32(threshold, _mm256_xor_si256(u, sign));
      vZ = _mm256_add_epi32(vZ, _mm256_and_si256(_mm256_and_si256(live, to_tail), one));
      vA = _mm256_add_epi32(vA, _mm256_and_si256(_mm256_andnot_si256(to_tail, live), one));
    }
    _mm256_store_si256(reinterpret_cast<__m256i*>(front), vA);
    _mm256_store_si256(reinterpret_cast<__m256i*>(tail), vZ);
    for (int l = 0; l < kLanes; ++l) ++block[l];
  }
}

}  // namespace evograph::kernels::avx2
