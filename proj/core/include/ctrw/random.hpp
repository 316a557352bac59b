#pragma once

// Counter-based random streams.
//
// Philox4x64-10 (Salmon et al., SC'11) keyed by the master seed. A stream is
// identified by a 128-bit stream id that occupies the two high counter words;
// the two low counter words enumerate blocks within the stream. Two streams
// with different ids therefore never share a counter value, so their outputs
// cannot overlap regardless of how many values each one consumes (up to 2^130
// per stream).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ctrw {

class PhiloxStream {
public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  PhiloxStream(std::uint64_t master_seed, std::uint64_t stream_id,
               std::uint64_t stream_tag = 0) noexcept
      : key_{master_seed, kKeyConstant}, counter_{0, 0, stream_id, stream_tag} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 4) {
      increment();
      buffer_ = philox4x64(counter_, key_);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  /// Raw Philox4x64-10 bijection, exposed for known-answer tests.
  static Block philox4x64(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = round_once(ctr, key);
    }
    return ctr;
  }

private:
  static constexpr std::uint64_t kKeyConstant = 0x5851F42D4C957F2DULL;
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) noexcept {
    __extension__ using u128 = unsigned __int128;
    const u128 product = static_cast<u128>(a) * b;
    hi = static_cast<std::uint64_t>(product >> 64);
    lo = static_cast<std::uint64_t>(product);
  }

  static Block round_once(const Block& ctr, const Key& key) noexcept {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }

  // Only the two low words advance; the stream id words are fixed.
  void increment() noexcept {
    if (++counter_[0] == 0) ++counter_[1];
  }

  Key key_;
  Block counter_;
  Block buffer_{};
  int pos_ = 4;
};

/// Uniform double in (0, 1]; never returns 0 so that -log(u) is finite.
template <class Engine>
double uniform_open_closed(Engine& engine) {
  return static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53;
}

/// Exponential(rate) by inversion.
template <class Engine>
double sample_exponential(Engine& engine, double rate) {
  return -std::log(uniform_open_closed(engine)) / rate;
}

template <class Engine>
bool sample_bernoulli(Engine& engine, double p) {
  // u in (0,1]: p = 1 always succeeds, p = 0 never does.
  return uniform_open_closed(engine) <= p;
}

}  // namespace ctrw
