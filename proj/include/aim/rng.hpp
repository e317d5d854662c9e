#pragma once

#include <array>
#include <cstdint>

namespace aim {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Each (key, counter) pair maps to an independent 128-bit output block, so
/// streams can be created per work item and consumed in any order without
/// shared state. The key is the 64-bit stream id; the counter advances by
/// one block per call.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(stream_id),
             static_cast<std::uint32_t>(stream_id >> 32)} {}

  /// Next 128-bit block; advances the counter.
  Block next_block();

  /// Pure round function: 10 Philox rounds of `counter` under `key`.
  static Block hash(const std::array<std::uint32_t, 4>& counter,
                    const std::array<std::uint32_t, 2>& key);

 private:
  std::array<std::uint32_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint32_t, 2> key_;
};

/// SplitMix64 finalizer; full-avalanche 64-bit mixing.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream id from a master seed and up to three
/// work-item coordinates (e.g. grid cell row/column and run index).
/// Results do not depend on evaluation order or thread placement.
std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t a,
                            std::uint64_t b = 0, std::uint64_t c = 0);

/// Deterministic stream of standard-normal draws (Box-Muller over Philox).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t stream_id) : engine_(stream_id) {}

  double next();

 private:
  Philox4x32 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Deterministic stream of 64-bit words / unit-interval doubles.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t stream_id) : engine_(stream_id) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double next_unit();

 private:
  Philox4x32 engine_;
  std::uint64_t spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace aim
