#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace plab {

// Counter-based Philox 4x32-10 generator.
//
// The key carries the 64-bit run seed, the counter carries the 64-bit stream
// id in its upper half and a block index in its lower half.  Every
// (seed, stream) pair therefore owns a statistically independent sequence
// that can be regenerated from scratch at any time, which is what makes
// multi-threaded runs bit-identical to serial ones: worker threads never
// share generator state, they just own disjoint stream ids.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  std::uint64_t next_u64() {
    if (avail_ == 0) refill();
    return buf_[--avail_];
  }

  // Uniform on the open interval (0,1).  The half-ulp offset keeps both
  // endpoints out, so log(u) and tan(pi*(u - 1/2)) are always finite.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second coordinate is cached.
  double next_normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_normal_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(a);
    have_normal_ = true;
    return r * std::cos(a);
  }

  // Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(
      const std::array<std::uint32_t, 4>& counter,
      const std::array<std::uint32_t, 2>& key) noexcept {
    std::uint32_t x0 = counter[0], x1 = counter[1], x2 = counter[2],
                  x3 = counter[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      x0 = hi1 ^ x1 ^ k0;
      x1 = lo1;
      x2 = hi0 ^ x3 ^ k1;
      x3 = lo0;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return {x0, x1, x2, x3};
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  void refill() {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_index_),
        static_cast<std::uint32_t>(block_index_ >> 32), stream_lo_,
        stream_hi_};
    const auto y = block(ctr, {key0_, key1_});
    ++block_index_;
    buf_[1] = (static_cast<std::uint64_t>(y[1]) << 32) | y[0];
    buf_[0] = (static_cast<std::uint64_t>(y[3]) << 32) | y[2];
    avail_ = 2;
  }

  std::uint32_t key0_, key1_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int avail_ = 0;
  bool have_normal_ = false;
  double cached_normal_ = 0.0;
};

// Stream-id layout: top byte names the purpose of the stream within one
// command invocation, the rest indexes paths (or other sampling units).
// Distinct purposes never collide even when both loop over the same indices.
enum class StreamDomain : std::uint64_t {
  paths = 0,
  increments = 1,
  auxiliary = 2,
};

inline std::uint64_t make_stream(StreamDomain domain, std::uint64_t index) {
  return (static_cast<std::uint64_t>(domain) << 56) |
         (index & 0x00FF'FFFF'FFFF'FFFFull);
}

}  // namespace plab
