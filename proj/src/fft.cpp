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

#include "zigzag/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "zigzag/error.hpp"

namespace zigzag {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FFT::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

FFT::FFT(const Grid& grid, int howmany) : grid_(grid), howmany_(howmany), plans_(std::make_unique<Plans>()) {
  int n[3];
  for (int a = 0; a < grid.dim; ++a) n[a] = grid.points[a];
  const int dist = static_cast<int>(grid.cells());
  // ESTIMATE keeps plans (and so results) independent of timing measurements.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Field scratch(static_cast<std::size_t>(dist) * howmany);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->fwd = fftw_plan_many_dft(grid.dim, n, howmany, p, nullptr, 1, dist, p, nullptr, 1, dist, FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_many_dft(grid.dim, n, howmany, p, nullptr, 1, dist, p, nullptr, 1, dist, FFTW_BACKWARD, flags);
  if (!plans_->fwd || !plans_->bwd) throw Error(ErrorKind::kNumerical, "FFTW planning failed");
}

FFT::~FFT() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->fwd) fftw_destroy_plan(plans_->fwd);
  if (plans_->bwd) fftw_destroy_plan(plans_->bwd);
}

void FFT::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->fwd, p, p);
}

void FFT::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->bwd, p, p);
  const double scale = 1.0 / static_cast<double>(grid_.cells());
  const std::size_t total = grid_.cells() * static_cast<std::size_t>(howmany_);
  for (std::size_t i = 0; i < total; ++i) data[i] *= scale;
}

Spectral::Spectral(const Grid& grid) : grid_(grid), fft_(grid, 1) {
  for (int a = 0; a < grid.dim; ++a) {
    k_[a] = grid.wavenumbers(a);
    k_odd_[a] = k_[a];
    if (grid.points[a] % 2 == 0) k_odd_[a][grid.points[a] / 2] = 0.0;
  }
}

std::size_t Spectral::stride(int axis) const {
  std::size_t s = 1;
  for (int a = grid_.dim - 1; a > axis; --a) s *= static_cast<std::size_t>(grid_.points[a]);
  return s;
}

Field Spectral::derivative(const Field& f, int axis) const {
  Field out(f);
  if (axis >= grid_.dim) {
    std::fill(out.begin(), out.end(), cplx(0.0));
    return out;
  }
  fft_.forward(out.data());
  const std::size_t s = stride(axis);
  const std::size_t n = static_cast<std::size_t>(grid_.points[axis]);
  const cplx I(0.0, 1.0);
  for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] *= I * k_odd_[axis][(idx / s) % n];
  fft_.backward(out.data());
  return out;
}

RealField Spectral::derivative(const RealField& f, int axis) const {
  Field c(f.begin(), f.end());
  c = derivative(c, axis);
  RealField out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = c[i].real();
  return out;
}

Field Spectral::laplacian(const Field& f) const {
  Field out(f);
  fft_.forward(out.data());
  std::array<std::size_t, 3> s{};
  for (int a = 0; a < grid_.dim; ++a) s[a] = stride(a);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    double k2 = 0.0;
    for (int a = 0; a < grid_.dim; ++a) {
      const double k = k_[a][(idx / s[a]) % static_cast<std::size_t>(grid_.points[a])];
      k2 += k * k;
    }
    out[idx] *= -k2;
  }
  fft_.backward(out.data());
  return out;
}

RealField Spectral::divergence(const std::array<const RealField*, 3>& v) const {
  RealField out(grid_.cells(), 0.0);
  for (int a = 0; a < grid_.dim; ++a) {
    if (!v[a]) continue;
    const RealField d = derivative(*v[a], a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  return out;
}

}  // namespace zigzag
