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

#include <memory>

#include "zigzag/grid.hpp"

namespace zigzag {

// In-place complex FFT over all grid axes, batched over `howmany` contiguous
// blocks of grid.cells() values. backward() includes the 1/N normalization.
class FFT {
 public:
  FFT(const Grid& grid, int howmany = 1);
  ~FFT();
  FFT(const FFT&) = delete;
  FFT& operator=(const FFT&) = delete;

  void forward(cplx* data) const;
  void backward(cplx* data) const;

  const Grid& grid() const { return grid_; }
  int howmany() const { return howmany_; }

 private:
  struct Plans;
  Grid grid_;
  int howmany_;
  std::unique_ptr<Plans> plans_;
};

// Spectral differentiation on a periodic grid. Odd derivatives drop the
// Nyquist mode so that they stay real for real input.
class Spectral {
 public:
  explicit Spectral(const Grid& grid);

  const Grid& grid() const { return grid_; }

  Field derivative(const Field& f, int axis) const;
  RealField derivative(const RealField& f, int axis) const;
  Field laplacian(const Field& f) const;
  // Divergence of a vector field given per grid axis; axes beyond grid.dim ignored.
  RealField divergence(const std::array<const RealField*, 3>& v) const;

 private:
  Grid grid_;
  FFT fft_;
  std::array<std::vector<double>, 3> k_;
  std::array<std::vector<double>, 3> k_odd_;
  std::size_t stride(int axis) const;
};

}  // namespace zigzag
