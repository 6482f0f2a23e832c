#include <cstdlib>
#include <stdexcept>
#include <string>

#include "evograph/kernels.hpp"

namespace evograph::kernels {
namespace {

Isa detect() {
  if (const char* env = std::getenv("EVOGRAPH_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(EVOGRAPH_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void philox_fill(Isa isa, PhiloxKey key, std::uint64_t first_block, std::uint32_t stream0,
                 std::uint32_t stream1, std::span<std::uint32_t> out) {
#ifdef EVOGRAPH_HAVE_AVX2
  if (isa == Isa::Avx2) return avx2::philox_fill(key, first_block, stream0, stream1, out);
#endif
  (void)isa;
  scalar::philox_fill(key, first_block, stream0, stream1, out);
}

void train_walks(Isa isa, const TrainWalkParams& params, std::uint64_t first_train,
                 std::span<std::uint32_t> lengths_out) {
  if (params.stem_length < 2) throw std::invalid_argument("train walk needs H >= 2");
#ifdef EVOGRAPH_HAVE_AVX2
  if (isa == Isa::Avx2) return avx2::train_walks(params, first_train, lengths_out);
#endif
  (void)isa;
  scalar::train_walks(params, first_train, lengths_out);
}

}  // namespace evograph::kernels
