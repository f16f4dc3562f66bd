#pragma once

#include <array>
#include <cstdint>

namespace fibflow {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream.
///
/// Sample i of stream (seed, stream_id) is a pure function of the triple, so
/// any partition of the index range over workers reproduces the same numbers.
/// The seed is the Philox key; the counter holds the block index in its low
/// words and the stream id in its high words.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// 64 random bits for sample `index`.
  std::uint64_t bits(std::uint64_t index) const noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const noexcept {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

  /// Sequential cursor over the same stream.
  double next() noexcept { return uniform(cursor_++); }
  std::uint64_t position() const noexcept { return cursor_; }
  void seek(std::uint64_t index) noexcept { cursor_ = index; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t cursor_ = 0;
};

}  // namespace fibflow
