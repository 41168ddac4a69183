#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hypwave {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Stream identifiers. A stream key is `seed ^ stream`, so streams that must
// never collide are spaced far apart in the high bits.
namespace stream {
inline constexpr std::uint64_t kOmega = 0;                  // + draw index
inline constexpr std::uint64_t kProbes = 1ull << 40;        // + probe set id
inline constexpr std::uint64_t kBerry = 2ull << 40;         // + draw index
inline constexpr std::uint64_t kSynthetic = 3ull << 40;     // + draw index
inline constexpr std::uint64_t kBootstrap = 4ull << 40;
inline constexpr std::uint64_t kGeodesics = 5ull << 40;
inline constexpr std::uint64_t kFrames = 6ull << 40;       // + sample point index
}  // namespace stream

/// Counter-based generator: key = seed ^ stream, counter = block index.
/// Any implementation of Philox4x32-10 reproduces its output stream.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (both outputs used).
  double normal();

  std::uint64_t key() const { return key_; }

 private:
  void refill();

  std::uint64_t key_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Uniform draw at an explicit position of a stream, without state.
/// Used where per-element reproducibility (e.g. weight j of draw d) matters.
double uniform_at(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index);

}  // namespace hypwave
