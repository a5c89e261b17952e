// Copyright 2026 The Zigzag Authors
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
#include <cstdint>

namespace zigzag {

// Philox4x32-10 (Salmon et al., SC'11). Counter-based: the output is a pure
// function of (counter, key), so any draw can be recomputed independently.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Separate streams for the independent uses of randomness on one trajectory.
enum class RngDomain : std::uint32_t {
  kPosition = 0,
  kLabel = 1,
  kJump = 2,
  kAux = 3,
};

// Sequence of uniforms for one (seed, stream index, domain). Two uniforms per
// Philox block; the draw index is part of the counter.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream, RngDomain domain);

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  std::uint64_t draws() const { return draw_; }

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint32_t domain_;
  std::uint64_t block_ = 0;
  std::uint64_t draw_ = 0;
  PhiloxCounter buffer_{};
  bool have_second_ = false;
};

}  // namespace zigzag
