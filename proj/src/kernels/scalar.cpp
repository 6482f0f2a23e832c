#include <stdexcept>

#include "evograph/kernels.hpp"

namespace evograph::kernels::scalar {

void philox_fill(PhiloxKey key, std::uint64_t first_block, std::uint32_t stream0,
                 std::uint32_t stream1, std::span<std::uint32_t> out) {
  if (out.size() % 4 != 0) throw std::invalid_argument("philox_fill needs whole blocks");
  const std::size_t blocks = out.size() / 4;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::uint64_t c = first_block + b;
    const PhiloxBlock words = philox4x32_10(
        {static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32), stream0, stream1}, key);
    for (int w = 0; w < 4; ++w) out[4 * b + w] = words[w];
  }
}

void train_walks(const TrainWalkParams& params, std::uint64_t first_train,
                 std::span<std::uint32_t> lengths_out) {
  const std::uint32_t H = params.stem_length;
  for (std::size_t t = 0; t < lengths_out.size(); ++t) {
    const std::uint64_t id = first_train + t;
    std::uint32_t front = 2, tail = 1;
    std::uint32_t draw = 0;
    PhiloxBlock words{};
    while (front < H && tail < front) {
      if (draw % 4 == 0) {
        words = philox4x32_10(
            {draw / 4, 0, static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)},
            params.key);
      }
      if (words[draw % 4] < params.tail_threshold) {
        ++tail;
      } else {
        ++front;
      }
      ++draw;
    }
    lengths_out[t] = tail < front ? front - tail : 0;
  }
}

}  // namespace evograph::kernels::scalar
