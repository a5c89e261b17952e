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

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "zigzag/grid.hpp"

namespace zigzag {

// Time-indexed frames of a multi-component field on a grid. Frames are stored
// frame-major, then component, then cell. Frame times are uniform:
// t_k = t0 + k * stride. Interpolation is cubic in space and linear in time.
struct WaveRecord {
  std::string kind;  // dirac1d, dirac3d, twoparticle, pauli
  Grid grid;
  int components = 0;
  double mass = 0.0;
  double t0 = 0.0;
  double stride = 0.0;
  int frames = 0;
  std::vector<std::string> component_names;
  std::vector<cplx> data;
  nlohmann::json meta = nlohmann::json::object();

  std::size_t frame_size() const { return grid.cells() * static_cast<std::size_t>(components); }
  double time(int k) const { return t0 + k * stride; }
  double t_end() const { return time(frames - 1); }

  cplx* frame(int k) { return data.data() + frame_size() * static_cast<std::size_t>(k); }
  const cplx* frame(int k) const { return data.data() + frame_size() * static_cast<std::size_t>(k); }
  cplx* component(int k, int c) { return frame(k) + grid.cells() * static_cast<std::size_t>(c); }
  const cplx* component(int k, int c) const { return frame(k) + grid.cells() * static_cast<std::size_t>(c); }

  // Nearest frame to t (for checkpoints placed on the frame lattice).
  int frame_at(double t) const;

  // All components at position x and time t (requires t0 <= t <= t_end).
  void sample(const double* x, double t, cplx* out) const;

  // Allocate storage for `frames` frames; throws kResource above the cap.
  void allocate(std::size_t cap_bytes);
};

// Flat little-endian binary of interleaved complex doubles plus a JSON sidecar.
// Writes <base>.bin and <base>.json atomically.
void write_record(const WaveRecord& rec, const std::string& base);
WaveRecord read_record(const std::string& base);
nlohmann::json record_header(const WaveRecord& rec);

}  // namespace zigzag
