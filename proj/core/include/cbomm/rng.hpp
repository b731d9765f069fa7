#pragma once

#include <cstdint>
#include <limits>

namespace cbomm {

/// SplitMix64 as a UniformRandomBitGenerator, usable with <random>
/// distributions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

enum class StreamTag : std::uint64_t {
  InitX = 1,
  InitY = 2,
  NoiseX = 3,
  NoiseY = 4,
};

/// Independent stream keyed by (seed, tag, step, particle). Draw order inside
/// a step cannot leak between particles, so particle updates may run in any
/// order or in parallel and still reproduce bit for bit.
inline SplitMix64 keyed_stream(std::uint64_t seed, StreamTag tag, std::uint64_t step,
                               std::uint64_t particle) noexcept {
  std::uint64_t h = SplitMix64::mix(seed + 0x9E3779B97F4A7C15ULL);
  h = SplitMix64::mix(h ^ (static_cast<std::uint64_t>(tag) * 0xD1B54A32D192ED03ULL));
  h = SplitMix64::mix(h ^ (step * 0x8CB92BA72F3D8DD7ULL + 0x632BE59BD9B4E019ULL));
  h = SplitMix64::mix(h ^ (particle * 0xABC98388FB8FAC03ULL + 0x2545F4914F6CDD1DULL));
  return SplitMix64(h);
}

}  // namespace cbomm
