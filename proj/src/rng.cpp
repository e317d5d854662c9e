#include "aim/rng.hpp"

#include <cmath>
#include <numbers>

namespace aim {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Block round_once(const Philox4x32::Block& c,
                                    const std::array<std::uint32_t, 2>& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mul_hi_lo(kPhiloxM0, c[0], hi0, lo0);
  mul_hi_lo(kPhiloxM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

/// Uniform in (0, 1]; never zero so it is safe under log().
inline double unit_open_below(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform in [0, 1).
inline double unit_open_above(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Block Philox4x32::hash(const std::array<std::uint32_t, 4>& counter,
                                   const std::array<std::uint32_t, 2>& key) {
  Block c = counter;
  std::array<std::uint32_t, 2> k = key;
  for (int r = 0; r < 10; ++r) {
    if (r != 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    c = round_once(c, k);
  }
  return c;
}

Philox4x32::Block Philox4x32::next_block() {
  const Block out = hash(counter_, key_);
  // 128-bit counter increment.
  if (++counter_[0] == 0)
    if (++counter_[1] == 0)
      if (++counter_[2] == 0) ++counter_[3];
  return out;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t a,
                            std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = mix64(master_seed);
  s = mix64(s ^ a);
  s = mix64(s ^ b);
  s = mix64(s ^ c);
  return s;
}

std::uint64_t UniformStream::next_u64() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto blk = engine_.next_block();
  spare_ = (static_cast<std::uint64_t>(blk[3]) << 32) | blk[2];
  has_spare_ = true;
  return (static_cast<std::uint64_t>(blk[1]) << 32) | blk[0];
}

double UniformStream::next_unit() { return unit_open_above(next_u64()); }

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto blk = engine_.next_block();
  const std::uint64_t w0 =
      (static_cast<std::uint64_t>(blk[1]) << 32) | blk[0];
  const std::uint64_t w1 =
      (static_cast<std::uint64_t>(blk[3]) << 32) | blk[2];
  const double u1 = unit_open_below(w0);
  const double u2 = unit_open_above(w1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

}  // namespace aim
