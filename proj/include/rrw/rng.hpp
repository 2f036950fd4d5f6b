#pragma once

#include <array>
#include <cstdint>

namespace rrw {

/// Philox4x64-10 block function (Salmon et al., SC'11). Pure: the output is a
/// function of (counter, key) only, which is what makes replica streams
/// independent of scheduling.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

/// A reproducible stream of uniforms keyed by (master seed, stream id, lane).
///
/// The key is (seed, stream id); the counter is (block index, lane, 0, 0). Two
/// streams that differ in any of the three coordinates never share a block.
/// Lanes let one replica own several independent sub-streams (e.g. the DP
/// sampling draw and the continuation draws of a drift estimate).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t lane = 0)
      : key_{seed, stream_id}, lane_(lane) {}

  std::uint64_t next_u64() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const noexcept { return key_[0]; }
  std::uint64_t stream_id() const noexcept { return key_[1]; }
  std::uint64_t lane() const noexcept { return lane_; }

  /// Number of 64-bit words consumed so far.
  std::uint64_t consumed() const noexcept {
    return block_ == 0 ? 0 : (block_ - 1) * 4 + pos_;
  }

 private:
  void refill() {
    buffer_ = philox4x64({block_, lane_, 0, 0}, key_);
    ++block_;
    pos_ = 0;
  }

  std::array<std::uint64_t, 2> key_;
  std::uint64_t lane_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int pos_ = 4;
};

}  // namespace rrw
