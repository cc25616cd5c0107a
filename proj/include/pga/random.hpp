#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pga {

namespace detail {
/// One Philox4x32-10 block; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);
}  // namespace detail

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The key is (seed, stream): two generators with the same seed and different
/// stream ids never share a counter block, so substreams for parallel workers
/// are just distinct stream ids. Output is a pure function of
/// (seed, stream, position), which is what the golden tests rely on.
class Philox {
 public:
  using result_type = std::uint64_t;

  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (used_ == 2) refill();
    return buffer_[used_++];
  }

  /// Generator for an independent substream of the same seed.
  Philox split(std::uint64_t stream) const noexcept {
    Philox out(0, stream);
    out.key_ = key_;
    return out;
  }

  std::uint64_t stream() const noexcept { return stream_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the Box-Muller transform (one value per call).
  double normal() noexcept;

  /// Binomial(n, prob) by summing Bernoulli draws; n is small in this code base.
  int binomial(int n, double prob) noexcept {
    int k = 0;
    for (int i = 0; i < n; ++i) k += uniform() < prob ? 1 : 0;
    return k;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int used_ = 2;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pga
