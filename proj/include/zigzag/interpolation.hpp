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
#include <cmath>
#include <cstddef>

#include "zigzag/grid.hpp"

namespace zigzag {

// Four-point periodic Lagrange (cubic) stencil along one axis.
struct Stencil1D {
  std::array<int, 4> index{};
  std::array<double, 4> weight{};
};

inline Stencil1D cubic_stencil(const Grid& g, int axis, double x) {
  const int n = g.points[axis];
  const double u = (x + 0.5 * g.extent[axis]) / g.spacing(axis);
  const double fl = std::floor(u);
  const double f = u - fl;
  int i0 = static_cast<int>(fl) % n;
  if (i0 < 0) i0 += n;
  Stencil1D s;
  for (int k = 0; k < 4; ++k) s.index[k] = (i0 - 1 + k + n) % n;
  s.weight[0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
  s.weight[1] = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
  s.weight[2] = -(f + 1.0) * f * (f - 2.0) / 2.0;
  s.weight[3] = (f + 1.0) * f * (f - 1.0) / 6.0;
  return s;
}

// Tensor-product stencil over all grid axes: up to 64 (offset, weight) pairs.
struct Stencil {
  int size = 0;
  std::array<std::size_t, 64> offset{};
  std::array<double, 64> weight{};
};

inline Stencil cubic_stencil(const Grid& g, const double* x) {
  std::array<Stencil1D, 3> s;
  for (int a = 0; a < g.dim; ++a) s[a] = cubic_stencil(g, a, x[a]);
  Stencil out;
  if (g.dim == 1) {
    for (int i = 0; i < 4; ++i) {
      out.offset[out.size] = s[0].index[i];
      out.weight[out.size++] = s[0].weight[i];
    }
  } else if (g.dim == 2) {
    const std::size_t n1 = g.points[1];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        out.offset[out.size] = s[0].index[i] * n1 + s[1].index[j];
        out.weight[out.size++] = s[0].weight[i] * s[1].weight[j];
      }
  } else {
    const std::size_t n1 = g.points[1], n2 = g.points[2];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          out.offset[out.size] = (s[0].index[i] * n1 + s[1].index[j]) * n2 + s[2].index[k];
          out.weight[out.size++] = s[0].weight[i] * s[1].weight[j] * s[2].weight[k];
        }
  }
  return out;
}

template <typename T>
inline T apply(const Stencil& s, const T* data) {
  T acc{};
  for (int i = 0; i < s.size; ++i) acc += s.weight[i] * data[s.offset[i]];
  return acc;
}

}  // namespace zigzag
