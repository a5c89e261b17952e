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

#include "zigzag/wave_record.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "zigzag/error.hpp"
#include "zigzag/interpolation.hpp"
#include "zigzag/io.hpp"

namespace zigzag {

static_assert(std::endian::native == std::endian::little, "record format assumes a little-endian host");

int WaveRecord::frame_at(double t) const {
  const long k = std::lround((t - t0) / stride);
  require(k >= 0 && k < frames, ErrorKind::kInvalid, "checkpoints", "time outside the record window");
  return static_cast<int>(k);
}

void WaveRecord::sample(const double* x, double t, cplx* out) const {
  const double u = (t - t0) / stride;
  int k = static_cast<int>(std::floor(u));
  if (k >= frames - 1) k = frames - 2;
  if (k < 0) k = 0;
  const double w = std::clamp(u - k, 0.0, 1.0);
  const Stencil s = cubic_stencil(grid, x);
  const std::size_t cells = grid.cells();
  const cplx* a = frame(k);
  const cplx* b = frames > 1 ? frame(k + 1) : a;
  for (int c = 0; c < components; ++c) {
    const cplx va = apply(s, a + c * cells);
    const cplx vb = apply(s, b + c * cells);
    out[c] = (1.0 - w) * va + w * vb;
  }
}

void WaveRecord::allocate(std::size_t cap_bytes) {
  const double bytes = static_cast<double>(frame_size()) * frames * sizeof(cplx);
  require(bytes <= static_cast<double>(cap_bytes), ErrorKind::kResource, "memory_cap_mb",
          "wave record of " + std::to_string(bytes / 1048576.0) + " MiB exceeds the configured cap");
  data.assign(frame_size() * static_cast<std::size_t>(frames), cplx(0.0));
}

nlohmann::json record_header(const WaveRecord& rec) {
  nlohmann::json h;
  h["format"] = "zigzag-record-1";
  h["kind"] = rec.kind;
  h["dim"] = rec.grid.dim;
  h["points"] = std::vector<int>(rec.grid.points.begin(), rec.grid.points.begin() + rec.grid.dim);
  h["extent"] = std::vector<double>(rec.grid.extent.begin(), rec.grid.extent.begin() + rec.grid.dim);
  h["components"] = rec.component_names;
  h["mass"] = rec.mass;
  h["t0"] = rec.t0;
  h["stride"] = rec.stride;
  h["frames"] = rec.frames;
  std::vector<double> times(rec.frames);
  for (int k = 0; k < rec.frames; ++k) times[k] = rec.time(k);
  h["times"] = times;
  h["layout"] = "frame-major, component, cell (row-major, last axis fastest); complex as (re, im) float64 LE";
  h["interpolation"] = {{"space", "cubic-lagrange-periodic"}, {"time", "linear"}};
  h["meta"] = rec.meta;
  return h;
}

void write_record(const WaveRecord& rec, const std::string& base) {
  std::string bytes(rec.data.size() * sizeof(cplx), '\0');
  std::memcpy(bytes.data(), rec.data.data(), bytes.size());
  atomic_write(base + ".bin", bytes);
  atomic_write(base + ".json", record_header(rec).dump(2) + "\n");
}

WaveRecord read_record(const std::string& base) {
  const auto h = nlohmann::json::parse(read_file(base + ".json"));
  WaveRecord rec;
  rec.kind = h.at("kind").get<std::string>();
  rec.grid.dim = h.at("dim").get<int>();
  const auto pts = h.at("points").get<std::vector<int>>();
  const auto ext = h.at("extent").get<std::vector<double>>();
  for (int a = 0; a < rec.grid.dim; ++a) {
    rec.grid.points[a] = pts.at(a);
    rec.grid.extent[a] = ext.at(a);
  }
  rec.component_names = h.at("components").get<std::vector<std::string>>();
  rec.components = static_cast<int>(rec.component_names.size());
  rec.mass = h.at("mass").get<double>();
  rec.t0 = h.at("t0").get<double>();
  rec.stride = h.at("stride").get<double>();
  rec.frames = h.at("frames").get<int>();
  rec.meta = h.value("meta", nlohmann::json::object());
  const std::string bytes = read_file(base + ".bin");
  require(bytes.size() == rec.frame_size() * rec.frames * sizeof(cplx), ErrorKind::kInvalid, "record",
          "binary size does not match the sidecar header");
  rec.data.resize(rec.frame_size() * rec.frames);
  std::memcpy(rec.data.data(), bytes.data(), bytes.size());
  return rec;
}

}  // namespace zigzag
