// Copyright 2026 The rlq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include <boost/math/special_functions/erf.hpp>

namespace rlq {

/// Counter-based random stream (Philox4x32-10). The 64-bit seed is the key;
/// the 64-bit stream id and a 64-bit block counter form the counter, so
/// streams with different ids never share blocks and any (seed, stream) pair
/// replays bit-exactly.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }
  /// Number of 64-bit words drawn so far.
  std::uint64_t counter() const { return drawn_; }

  std::uint64_t next_u64() {
    if ((drawn_ & 1u) == 0) block_ = philox(drawn_ >> 1);
    const std::size_t k = (drawn_ & 1u) * 2;
    ++drawn_;
    return (static_cast<std::uint64_t>(block_[k]) << 32) | block_[k + 1];
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by inversion of the CDF.
  double normal() {
    const double u = uniform();
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
  }

  /// Uniform on [-sqrt(3), sqrt(3)]: zero mean, unit variance.
  double centered_uniform() { return std::sqrt(3.0) * (2.0 * uniform() - 1.0); }

 private:
  using Block = std::array<std::uint32_t, 4>;

  Block philox(std::uint64_t block) const {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    Block ctr{static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
              static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0, static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1, static_cast<std::uint32_t>(p0)};
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return ctr;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t drawn_ = 0;
  Block block_{};
};

/// Stream ids used by the library so that independent consumers of one seed
/// never overlap.
namespace streams {
inline constexpr std::uint64_t kParameters = 0;
inline constexpr std::uint64_t kMoments = 1;
inline constexpr std::uint64_t kMomentCheck = 2;
}  // namespace streams

}  // namespace rlq
