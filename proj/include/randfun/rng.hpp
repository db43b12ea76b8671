#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace randfun {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A draw is a
// pure function of (key, counter), which lets every coefficient of every
// trial be generated independently of evaluation order and thread count.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static constexpr Counter single_round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

// Stream tags separate independent uses of the same (seed, trial) pair.
enum class Stream : std::uint32_t {
  Coefficients = 1,
  Angles = 2,
  Search = 3,
  Vectors = 4,
  Conditioned = 5,
  Intervals = 6,
};

// Addresses the substream (seed, trial, stream); `uniform_pair(n)` returns two
// independent uniforms in the open interval (0, 1) for slot n.
class Substream {
 public:
  constexpr Substream(std::uint64_t seed, std::uint64_t trial, Stream stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        trial_(trial),
        stream_(static_cast<std::uint32_t>(stream)) {}

  std::array<double, 2> uniform_pair(std::uint64_t n) const {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(n),
                                  static_cast<std::uint32_t>(n >> 32) ^ (stream_ << 16),
                                  static_cast<std::uint32_t>(trial_),
                                  static_cast<std::uint32_t>(trial_ >> 32)};
    const auto out = Philox4x32::generate(ctr, key_);
    const std::uint64_t a = (std::uint64_t{out[0]} << 32) | out[1];
    const std::uint64_t b = (std::uint64_t{out[2]} << 32) | out[3];
    return {to_open_unit(a), to_open_unit(b)};
  }

  double uniform(std::uint64_t n) const { return uniform_pair(n)[0]; }

  // Standard complex Gaussian, density exp(-|z|^2)/pi: |z|^2 ~ Exp(1) with a
  // uniform phase.
  std::complex<double> complex_gaussian(std::uint64_t n) const {
    const auto [u, v] = uniform_pair(n);
    return std::polar(std::sqrt(-std::log(u)), 2.0 * std::numbers::pi * v);
  }

  double rademacher(std::uint64_t n) const { return uniform(n) < 0.5 ? -1.0 : 1.0; }

  std::complex<double> steinhaus(std::uint64_t n) const {
    return std::polar(1.0, 2.0 * std::numbers::pi * uniform(n));
  }

 private:
  static double to_open_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  Philox4x32::Key key_;
  std::uint64_t trial_;
  std::uint32_t stream_;
};

// Sequential view of a substream, for code that just needs "the next number".
class SubstreamCursor {
 public:
  explicit SubstreamCursor(Substream s) : stream_(s) {}

  double uniform() { return stream_.uniform(next_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const auto [u, v] = stream_.uniform_pair(next_++);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }
  std::complex<double> complex_gaussian() { return stream_.complex_gaussian(next_++); }
  double rademacher() { return stream_.rademacher(next_++); }

 private:
  Substream stream_;
  std::uint64_t next_ = 0;
};

}  // namespace randfun
