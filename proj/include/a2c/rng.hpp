#pragma once

#include <cstddef>
#include <cstdint>

namespace a2c {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

enum class StreamPurpose : std::uint64_t { reward = 1, tie_break = 2 };

// Key for the substream owned by one agent within one Monte Carlo run.
// The run seed is `seed ^ run_index`; agent and purpose are hashed in on top.
constexpr std::uint64_t substream_key(std::uint64_t seed, std::uint64_t run_index,
                                      std::uint64_t agent, StreamPurpose purpose) noexcept {
  std::uint64_t k = mix64(seed ^ run_index);
  k = mix64(k ^ (0x9e3779b97f4a7c15ULL * (agent + 1)));
  k = mix64(k ^ (0xd1b54a32d192ed03ULL * static_cast<std::uint64_t>(purpose)));
  return k;
}

// Counter-based stream: the n-th output is mix64(key + n * golden_gamma), so a
// stream is fully determined by its key and the number of draws taken from it.
class RandomStream {
 public:
  explicit constexpr RandomStream(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, n). n must be positive.
  constexpr std::size_t uniform_index(std::size_t n) noexcept {
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return static_cast<std::size_t>(x % bound);
    }
  }

  constexpr std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace a2c
