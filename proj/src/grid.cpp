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

#include "zigzag/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "zigzag/error.hpp"

namespace zigzag {

Grid Grid::line(int n, double length) {
  Grid g;
  g.dim = 1;
  g.points = {n, 1, 1};
  g.extent = {length, 1.0, 1.0};
  return g;
}

Grid Grid::square(int n, double length) {
  Grid g;
  g.dim = 2;
  g.points = {n, n, 1};
  g.extent = {length, length, 1.0};
  return g;
}

Grid Grid::cube(int n, double length) {
  Grid g;
  g.dim = 3;
  g.points = {n, n, n};
  g.extent = {length, length, length};
  return g;
}

std::size_t Grid::cells() const {
  std::size_t c = 1;
  for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(points[a]);
  return c;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

double Grid::min_spacing() const {
  double h = spacing(0);
  for (int a = 1; a < dim; ++a) h = std::min(h, spacing(a));
  return h;
}

std::vector<double> Grid::wavenumbers(int axis) const {
  const int n = points[axis];
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / extent[axis];
  for (int i = 0; i < n; ++i) k[i] = base * (i <= n / 2 ? i : i - n);
  return k;
}

double Grid::wrap(int axis, double x) const {
  const double L = extent[axis];
  double y = std::fmod(x + 0.5 * L, L);
  if (y < 0) y += L;
  if (y >= L) y -= L;
  return y - 0.5 * L;
}

void Grid::validate(std::size_t bytes_per_cell, std::size_t cap_bytes) const {
  require(dim >= 1 && dim <= 3, ErrorKind::kInvalid, "grid.points", "grid dimension must be 1, 2 or 3");
  for (int a = 0; a < dim; ++a) {
    const int n = points[a];
    require(n >= 16 && (n & (n - 1)) == 0, ErrorKind::kInvalid, "grid.points",
            "points per axis must be a power of two and at least 16, got " + std::to_string(n));
    require(std::isfinite(extent[a]) && extent[a] > 0, ErrorKind::kInvalid, "grid.extent",
            "extent must be positive");
  }
  const double bytes = static_cast<double>(cells()) * static_cast<double>(bytes_per_cell);
  require(bytes <= static_cast<double>(cap_bytes), ErrorKind::kResource, "memory_cap_mb",
          "grid needs " + std::to_string(bytes / 1048576.0) + " MiB, above the configured cap");
}

bool Grid::operator==(const Grid& o) const {
  if (dim != o.dim) return false;
  for (int a = 0; a < dim; ++a)
    if (points[a] != o.points[a] || extent[a] != o.extent[a]) return false;
  return true;
}

double integrate(const Grid& g, const RealField& f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * g.cell_volume();
}

}  // namespace zigzag
