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
#include <cstddef>
#include <vector>

#include "zigzag/spinor.hpp"

namespace zigzag {

// Periodic box [-L/2, L/2) per axis, row-major storage (last axis fastest).
struct Grid {
  int dim = 1;
  std::array<int, 3> points{1, 1, 1};
  std::array<double, 3> extent{1.0, 1.0, 1.0};

  static Grid line(int n, double length);
  static Grid square(int n, double length);
  static Grid cube(int n, double length);

  std::size_t cells() const;
  double spacing(int axis) const { return extent[axis] / points[axis]; }
  double coord(int axis, int i) const { return -0.5 * extent[axis] + i * spacing(axis); }
  double cell_volume() const;
  double min_spacing() const;
  std::vector<double> wavenumbers(int axis) const;

  // Fold a coordinate back into [-L/2, L/2).
  double wrap(int axis, double x) const;

  // Throws on invalid sizes or when cells * bytes_per_cell exceeds the cap.
  void validate(std::size_t bytes_per_cell, std::size_t cap_bytes) const;

  bool operator==(const Grid& o) const;
};

using Field = std::vector<cplx>;
using RealField = std::vector<double>;

// Sum of values times cell volume.
double integrate(const Grid& g, const RealField& f);

}  // namespace zigzag
