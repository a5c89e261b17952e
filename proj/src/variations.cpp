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

#include "zigzag/variations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zigzag/error.hpp"

namespace zigzag {

namespace {

const cplx I(0.0, 1.0);

Vec3Field zeros3(std::size_t n) { return {RealField(n, 0.0), RealField(n, 0.0), RealField(n, 0.0)}; }

double max_of(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) m = std::max(m, a[q] + b[q]);
  return m;
}

void fill_velocities(SplitSample& s, double mask) {
  const std::size_t n = s.exchange.size();
  const double cut = mask * max_of(s.density[0], s.density[1]);
  for (int i = 0; i < 2; ++i) {
    s.velocity[i] = zeros3(n);
    for (std::size_t q = 0; q < n; ++q) {
      if (!(s.density[i][q] > cut)) continue;
      for (int a = 0; a < 3; ++a) s.velocity[i][a][q] = s.current[i][a][q] / s.density[i][q];
    }
  }
}

Potentials vector_potential_only(const Grid& grid, const Vec3Field& A) {
  Potentials p;
  p.V.assign(grid.cells(), 0.0);
  for (int a = 0; a < 3; ++a) {
    p.A[a] = A[a];
    p.E[a].assign(grid.cells(), 0.0);
    p.B[a].assign(grid.cells(), 0.0);
  }
  p.has_vector_potential = true;
  return p;
}

Field covariant(const PauliOps& ops, const Field& psi, const RealField& A, int a, double e) {
  Field out = ops.d(psi, a);
  for (std::size_t q = 0; q < psi.size(); ++q) out[q] -= I * (e * A[q]) * psi[q];
  return out;
}

Field scalar_hamiltonian(const ScalarField& f, const PauliOps& ops) {
  const std::size_t n = f.psi.size();
  Field out(n, 0.0);
  for (int a = 0; a < 3; ++a) {
    const Field dd = covariant(ops, covariant(ops, f.psi, f.A[a], a, f.charge), f.A[a], a, f.charge);
    for (std::size_t q = 0; q < n; ++q) out[q] -= dd[q] / (2 * f.mass);
  }
  for (std::size_t q = 0; q < n; ++q) out[q] += f.U[q] * f.psi[q];
  return out;
}

void check_scalar(const ScalarField& f) {
  const std::size_t n = f.grid.cells();
  require(f.mass > 0, ErrorKind::kInvalid, "mass", "mass must be positive");
  require(f.psi.size() == n && f.U.size() == n, ErrorKind::kInvalid, "psi", "scalar field does not match its grid");
  for (int a = 0; a < 3; ++a) require(f.A[a].size() == n, ErrorKind::kInvalid, "A", "vector potential size");
}

template <class Sample>
void fill_tables(TabulatedModel& tm, int k, const Grid& grid, const Sample& s) {
  for (int c = 0; c < 2; ++c) {
    std::copy(s.density[c].begin(), s.density[c].end(), tm.density(k, c));
    std::copy(s.density[c].begin(), s.density[c].end(), tm.velocity_den(k, c));
    for (int a = 0; a < grid.dim; ++a) {
      const RealField& j = s.current[c][physical_axis(grid, a)];
      std::copy(j.begin(), j.end(), tm.velocity_num(k, c, a));
    }
    std::fill(tm.kappa(k, c), tm.kappa(k, c) + grid.cells(), 0.0);
  }
  std::copy(s.exchange.begin(), s.exchange.end(), tm.gain_x(k));
  std::fill(tm.gain_y(k), tm.gain_y(k) + grid.cells(), 0.0);
}

}  // namespace

std::array<double, 2> split_rates(const SplitSample& s, std::size_t q) {
  std::array<double, 2> r{0.0, 0.0};
  const double x = s.exchange[q];
  if (s.density[0][q] > 0 && x < 0) r[0] = -x / s.density[0][q];
  if (s.density[1][q] > 0 && x > 0) r[1] = x / s.density[1][q];
  return r;
}

SplitSample spin_split_guidance(const PauliField& f, double mask) {
  const PauliOps ops(f.grid, f.pot, f.mass, f.charge);
  const std::size_t n = f.grid.cells();
  SplitSample s;
  for (int i = 0; i < 2; ++i) {
    s.density[i].resize(n);
    s.current[i] = zeros3(n);
    for (std::size_t q = 0; q < n; ++q) s.density[i][q] = std::norm(f.phi[i][q]);
  }
  for (int a = 0; a < 3; ++a) {
    const Spinor2Field Dphi = ops.D(f.phi, a);
    for (int i = 0; i < 2; ++i)
      for (std::size_t q = 0; q < n; ++q)
        s.current[i][a][q] = (std::conj(f.phi[i][q]) * Dphi[i][q]).imag() / f.mass;
  }
  s.exchange.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    const cplx b(f.pot.B[0][q], f.pot.B[1][q]);
    s.exchange[q] = f.charge / f.mass * (b * std::conj(f.phi[1][q]) * f.phi[0][q]).imag();
  }
  fill_velocities(s, mask);
  return s;
}

double spin_split_continuity_residual(const PauliField& f) {
  const PauliOps ops(f.grid, f.pot, f.mass, f.charge);
  const SplitSample s = spin_split_guidance(f);
  const Spinor2Field h = ops.hamiltonian(f.phi);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    const RealField div = ops.div(s.current[i]);
    const double sign = i == 0 ? 1.0 : -1.0;
    for (std::size_t q = 0; q < div.size(); ++q) {
      const double dt_rho = 2.0 * (std::conj(f.phi[i][q]) * h[i][q]).imag();
      worst = std::max(worst, std::abs(dt_rho + div[q] - sign * s.exchange[q]));
    }
  }
  return worst;
}

SplitSample reim_split_guidance(const ScalarField& f, double mask) {
  check_scalar(f);
  const PauliOps ops(f.grid, vector_potential_only(f.grid, f.A), f.mass, f.charge);
  const std::size_t n = f.grid.cells();
  const double m = f.mass, e = f.charge;
  RealField p1(n), p2(n);
  for (std::size_t q = 0; q < n; ++q) {
    p1[q] = f.psi[q].real();
    p2[q] = f.psi[q].imag();
  }
  SplitSample s;
  s.density[0].resize(n);
  s.density[1].resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    s.density[0][q] = p1[q] * p1[q];
    s.density[1][q] = p2[q] * p2[q];
  }
  s.current[0] = zeros3(n);
  s.current[1] = zeros3(n);
  s.exchange.assign(n, 0.0);
  for (int a = 0; a < 3; ++a) {
    const RealField d1 = ops.d(p1, a), d2 = ops.d(p2, a);
    const RealField& A = f.A[a];
    for (std::size_t q = 0; q < n; ++q) {
      s.current[0][a][q] = p1[q] * (d2[q] - e * A[q] * p1[q]) / m;
      s.current[1][a][q] = -p2[q] * (d1[q] + e * A[q] * p2[q]) / m;
      s.exchange[q] += d1[q] * d2[q] / m + e * e / m * A[q] * A[q] * p1[q] * p2[q];
    }
  }
  for (std::size_t q = 0; q < n; ++q) s.exchange[q] += 2.0 * f.U[q] * p1[q] * p2[q];
  fill_velocities(s, mask);
  return s;
}

double reim_split_continuity_residual(const ScalarField& f) {
  const PauliOps ops(f.grid, vector_potential_only(f.grid, f.A), f.mass, f.charge);
  const SplitSample s = reim_split_guidance(f);
  const Field h = scalar_hamiltonian(f, ops);
  const RealField div0 = ops.div(s.current[0]), div1 = ops.div(s.current[1]);
  double worst = 0.0;
  for (std::size_t q = 0; q < h.size(); ++q) {
    // d_t psi = -i H psi
    const double dt1 = 2.0 * f.psi[q].real() * h[q].imag();
    const double dt2 = -2.0 * f.psi[q].imag() * h[q].real();
    worst = std::max(worst, std::abs(dt1 + div0[q] - s.exchange[q]));
    worst = std::max(worst, std::abs(dt2 + div1[q] + s.exchange[q]));
  }
  return worst;
}

Vec3Field dbb_velocity(const ScalarField& f, double mask) {
  check_scalar(f);
  const PauliOps ops(f.grid, vector_potential_only(f.grid, f.A), f.mass, f.charge);
  const std::size_t n = f.grid.cells();
  double dmax = 0.0;
  for (const cplx& v : f.psi) dmax = std::max(dmax, std::norm(v));
  Vec3Field v = zeros3(n);
  for (int a = 0; a < 3; ++a) {
    const Field d = ops.d(f.psi, a);
    for (std::size_t q = 0; q < n; ++q) {
      const double rho = std::norm(f.psi[q]);
      if (!(rho > mask * dmax)) continue;
      v[a][q] = ((std::conj(f.psi[q]) * d[q]).imag() - f.charge * f.A[a][q] * rho) / (f.mass * rho);
    }
  }
  return v;
}

RealField gauge_function(const Grid& grid, const GaugeSpec& g) {
  RealField th(grid.cells());
  const std::size_t inner = grid.cells() / grid.points[0];
  for (std::size_t q = 0; q < th.size(); ++q) {
    const double x = grid.coord(0, static_cast<int>(q / inner));
    th[q] = g.offset + g.amplitude * std::sin(2 * std::numbers::pi * x / grid.extent[0]);
  }
  return th;
}

ScalarField gauge_transform(const ScalarField& f, const RealField& theta) {
  require(theta.size() == f.grid.cells(), ErrorKind::kInvalid, "gauge", "gauge function does not match the grid");
  Spectral sp(f.grid);
  ScalarField out = f;
  for (std::size_t q = 0; q < theta.size(); ++q) out.psi[q] *= std::exp(I * (f.charge * theta[q]));
  for (int g = 0; g < f.grid.dim; ++g) {
    const RealField d = sp.derivative(theta, g);
    RealField& A = out.A[physical_axis(f.grid, g)];
    for (std::size_t q = 0; q < d.size(); ++q) A[q] += d[q];
  }
  return out;
}

ScalarField scalar_from_pauli(const PauliField& f) {
  const std::size_t n = f.grid.cells();
  double b = 0.0, lower = 0.0, upper = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    for (int a = 0; a < 3; ++a) b = std::max(b, std::abs(f.pot.B[a][q]));
    lower = std::max(lower, std::norm(f.phi[1][q]));
    upper = std::max(upper, std::norm(f.phi[0][q]));
  }
  require(b == 0.0, ErrorKind::kInvalid, "potential", "the real/imaginary split needs a potential without magnetic field");
  require(lower <= 1e-24 * upper, ErrorKind::kInvalid, "spin", "the real/imaginary split needs a spin-up state");
  ScalarField s;
  s.grid = f.grid;
  s.psi = f.phi[0];
  s.mass = f.mass;
  s.charge = f.charge;
  for (int a = 0; a < 3; ++a) s.A[a] = f.pot.A[a];
  s.U.resize(n);
  for (std::size_t q = 0; q < n; ++q) s.U[q] = f.charge * f.pot.V[q];
  return s;
}

std::shared_ptr<TabulatedModel> build_spin_split_model(const WaveRecord& pauli, int frame_step,
                                                       std::size_t cap_bytes) {
  require(pauli.kind == "pauli", ErrorKind::kInvalid, "record", "the spin split needs a Pauli record");
  require(frame_step >= 1, ErrorKind::kInvalid, "output_stride", "frame step must be positive");
  const Potentials pot = record_potentials(pauli);
  const int frames = (pauli.frames - 1) / frame_step + 1;
  auto tm = std::make_shared<TabulatedModel>(pauli.grid, std::vector<std::string>{"up", "down"}, pauli.t0,
                                             pauli.stride * frame_step, frames, cap_bytes);
  for (int k = 0; k < frames; ++k)
    fill_tables(*tm, k, pauli.grid, spin_split_guidance(pauli_frame(pauli, pot, k * frame_step)));
  tm->finalize(pauli.mass);
  return tm;
}

std::shared_ptr<TabulatedModel> build_reim_split_model(const WaveRecord& pauli, const GaugeSpec& gauge,
                                                       int frame_step, std::size_t cap_bytes) {
  require(pauli.kind == "pauli", ErrorKind::kInvalid, "record", "the real/imaginary split needs a Pauli record");
  require(frame_step >= 1, ErrorKind::kInvalid, "output_stride", "frame step must be positive");
  const Potentials pot = record_potentials(pauli);
  const RealField theta = gauge_function(pauli.grid, gauge);
  const int frames = (pauli.frames - 1) / frame_step + 1;
  auto tm = std::make_shared<TabulatedModel>(pauli.grid, std::vector<std::string>{"1", "2"}, pauli.t0,
                                             pauli.stride * frame_step, frames, cap_bytes);
  for (int k = 0; k < frames; ++k) {
    const ScalarField f = gauge_transform(scalar_from_pauli(pauli_frame(pauli, pot, k * frame_step)), theta);
    fill_tables(*tm, k, pauli.grid, reim_split_guidance(f));
  }
  tm->finalize(pauli.mass);
  return tm;
}

std::shared_ptr<TabulatedModel> build_scalar_bohm_model(const WaveRecord& pauli, const GaugeSpec& gauge,
                                                        int frame_step, std::size_t cap_bytes) {
  require(pauli.kind == "pauli", ErrorKind::kInvalid, "record", "the Bohm control needs a Pauli record");
  require(frame_step >= 1, ErrorKind::kInvalid, "output_stride", "frame step must be positive");
  const Potentials pot = record_potentials(pauli);
  const RealField theta = gauge_function(pauli.grid, gauge);
  const int frames = (pauli.frames - 1) / frame_step + 1;
  const std::size_t n = pauli.grid.cells();
  auto tm = std::make_shared<TabulatedModel>(pauli.grid, std::vector<std::string>{"D", "-"}, pauli.t0,
                                             pauli.stride * frame_step, frames, cap_bytes);
  for (int k = 0; k < frames; ++k) {
    const ScalarField f = gauge_transform(scalar_from_pauli(pauli_frame(pauli, pot, k * frame_step)), theta);
    SplitSample s;
    s.exchange.assign(n, 0.0);
    s.density[0].resize(n);
    s.density[1].assign(n, 0.0);
    for (std::size_t q = 0; q < n; ++q) s.density[0][q] = std::norm(f.psi[q]);
    // Current (Im(psi^* grad psi) - e A |psi|^2) / m, the numerator of the Bohm velocity.
    const Vec3Field v = dbb_velocity(f, 0.0);
    s.current[0] = zeros3(n);
    s.current[1] = zeros3(n);
    for (int a = 0; a < 3; ++a)
      for (std::size_t q = 0; q < n; ++q) s.current[0][a][q] = v[a][q] * s.density[0][q];
    fill_tables(*tm, k, pauli.grid, s);
  }
  tm->finalize(pauli.mass);
  return tm;
}

Spinor2Field rotate_quarter_x(const Grid& grid, const Spinor2Field& phi) {
  require(grid.dim == 2 && grid.points[0] == grid.points[1] && grid.extent[0] == grid.extent[1],
          ErrorKind::kInvalid, "grid", "quarter-turn rotation needs a square 2D grid");
  const int N = grid.points[0];
  const double r = 1.0 / std::sqrt(2.0);
  Spinor2Field out{Field(grid.cells()), Field(grid.cells())};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const std::size_t src = static_cast<std::size_t>(j) * N + (N - i) % N;
      const cplx u = phi[0][src], w = phi[1][src];
      const std::size_t dst = static_cast<std::size_t>(i) * N + j;
      out[0][dst] = r * (u - I * w);
      out[1][dst] = r * (w - I * u);
    }
  return out;
}

std::array<double, 2> rotate_point_quarter_x(const std::array<double, 2>& yz) { return {-yz[1], yz[0]}; }

}  // namespace zigzag
