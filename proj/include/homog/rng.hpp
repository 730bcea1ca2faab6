#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace homog {

// Philox4x32-10 counter-based generator. Streams are addressed by
// (seed, stream, substream): the stream selects the key, the substream
// selects a disjoint 2^64 counter block, so every (path, stage) pair gets
// an independent sequence no matter how work is split across threads.
namespace philox {

struct Block {
  std::array<std::uint32_t, 4> v;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Block generate(std::uint64_t key64, std::uint64_t ctr_lo, std::uint64_t ctr_hi) {
  std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
  std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
  std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key64);
  std::uint32_t k1 = static_cast<std::uint32_t>(key64 >> 32);
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    std::uint64_t m0 = 0xD2511F53ULL * c0;
    std::uint64_t m1 = 0xCD9E8D57ULL * c2;
    std::uint32_t hi0 = static_cast<std::uint32_t>(m0 >> 32);
    std::uint32_t lo0 = static_cast<std::uint32_t>(m0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(m1 >> 32);
    std::uint32_t lo1 = static_cast<std::uint32_t>(m1);
    std::uint32_t n0 = hi1 ^ c1 ^ k0;
    std::uint32_t n1 = lo1;
    std::uint32_t n2 = hi0 ^ c3 ^ k1;
    std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
  }
  return Block{{c0, c1, c2, c3}};
}

}  // namespace philox

// One substream. Draws advance a private 64-bit counter; the (stream,
// substream) pair is baked into the key / high counter word.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
      : key_(philox::splitmix64(philox::splitmix64(seed) ^ stream)),
        ctr_hi_(substream),
        ctr_lo_(0) {}

  std::uint64_t next_u64() {
    if (buf_pos_ >= 2) refill();
    return buf_[buf_pos_++];
  }

  // uniform in (0, 1]: never returns 0 so log() is safe
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  // standard normal via Box-Muller; pairs cached
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  void refill() {
    philox::Block b = philox::generate(key_, ctr_lo_, ctr_hi_);
    buf_[0] = (static_cast<std::uint64_t>(b.v[1]) << 32) | b.v[0];
    buf_[1] = (static_cast<std::uint64_t>(b.v[3]) << 32) | b.v[2];
    ++ctr_lo_;
    buf_pos_ = 0;
  }

  std::uint64_t key_;
  std::uint64_t ctr_hi_;
  std::uint64_t ctr_lo_;
  std::array<std::uint64_t, 2> buf_{};
  int buf_pos_ = 2;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Fixed stream ids per stage so artifacts are reproducible run to run.
namespace stream_id {
inline constexpr std::uint64_t kGibbs = 0x01;
inline constexpr std::uint64_t kMixing = 0x02;
inline constexpr std::uint64_t kCorrector = 0x03;
inline constexpr std::uint64_t kCorrectorPrime = 0x04;
inline constexpr std::uint64_t kEffMartingale = 0x05;
inline constexpr std::uint64_t kEffMsd = 0x06;
inline constexpr std::uint64_t kHomogPaths = 0x07;
inline constexpr std::uint64_t kHomogLimit = 0x08;
inline constexpr std::uint64_t kHomogZeta = 0x09;
inline constexpr std::uint64_t kRandomEnv = 0x0a;
inline constexpr std::uint64_t kVerify = 0x0b;
inline constexpr std::uint64_t kPermutation = 0x0c;
}  // namespace stream_id

}  // namespace homog
