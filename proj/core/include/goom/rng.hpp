#pragma once

// Counter-based SplitMix64 generator.
//
// Draw k of stream s under seed S is mix(key(S, s) + (k + 1) * golden), so any
// draw can be regenerated independently of the others and parallel trials get
// disjoint, reproducible streams regardless of scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace goom {

inline constexpr std::string_view kRngId = "splitmix64-ctr/v1";

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(splitmix64_mix(seed ^ splitmix64_mix(stream + kGolden))) {}

  std::uint64_t at(std::uint64_t counter) const noexcept { return splitmix64_mix(key_ + (counter + 1) * kGolden); }

  std::uint64_t next_u64() noexcept { return at(counter_++); }

  /// Uniform in (0, 1): 53 random bits offset by half an ulp.
  double uniform() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; both variates of a pair are used.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace goom
