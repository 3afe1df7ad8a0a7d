#pragma once

#include <array>
#include <cstdint>

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stream is
// fixed by (seed, stream id); the 64-bit seed is the key and the stream id
// occupies the high half of the 128-bit counter, so streams never overlap.

namespace geodisc {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key);

enum class StreamTag : std::uint64_t { PointSampling = 1, MonteCarloBlock = 2, Bootstrap = 3 };

inline std::uint64_t stream_id(StreamTag tag, std::uint64_t index) {
  return (static_cast<std::uint64_t>(tag) << 48) | (index & ((std::uint64_t{1} << 48) - 1));
}

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  // Standard normal via Box-Muller; caches the second variate.
  double gaussian();

 private:
  void refill();

  Philox4x32Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32Counter buf_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace geodisc
