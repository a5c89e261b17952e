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

#include "zigzag/wave_dynamics.hpp"

#include <cmath>
#include <numbers>

#include "zigzag/error.hpp"
#include "zigzag/fft.hpp"

namespace zigzag {

namespace {

const cplx I(0.0, 1.0);

// sin(E t)/E with the E -> 0 limit.
double sinc_t(double E, double t) { return E > 0.0 ? std::sin(E * t) / E : t; }

}  // namespace

void require_finite(const Field& f, const char* what) {
  for (const auto& v : f)
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::kNumerical, what,
            std::string("non-finite initial data in ") + what);
}

int frame_count(double t_final, double dt) {
  require(dt > 0 && std::isfinite(dt), ErrorKind::kInvalid, "dt", "dt must be positive");
  require(t_final > 0 && std::isfinite(t_final), ErrorKind::kInvalid, "t_final", "t_final must be positive");
  const long steps = std::lround(t_final / dt);
  require(steps >= 1, ErrorKind::kInvalid, "dt", "dt larger than t_final");
  return static_cast<int>(steps) + 1;
}

ChiralField1D chiral_packets(const Grid& grid, const std::vector<ChiralPacket>& packets) {
  require(grid.dim == 1, ErrorKind::kInvalid, "grid", "chiral packets need a 1D grid");
  ChiralField1D out{grid, Field(grid.cells()), Field(grid.cells())};
  for (const auto& p : packets) {
    require(p.width > 0, ErrorKind::kInvalid, "initial.packets.width", "packet width must be positive");
    for (int i = 0; i < grid.points[0]; ++i) {
      // Nearest periodic image of the packet center.
      const double dz = grid.wrap(0, grid.coord(0, i) - p.center);
      const double env = std::exp(-dz * dz / (4.0 * p.width * p.width));
      const cplx phase = std::exp(I * (p.momentum * dz));
      out.f[i] += p.amp_R * env * phase;
      out.g[i] += p.amp_L * env * phase;
    }
  }
  double norm = 0.0;
  for (std::size_t i = 0; i < out.f.size(); ++i) norm += std::norm(out.f[i]) + std::norm(out.g[i]);
  norm *= grid.cell_volume();
  require(norm > 0, ErrorKind::kInvalid, "initial", "initial state has zero norm");
  const double s = 1.0 / std::sqrt(norm);
  for (auto& v : out.f) v *= s;
  for (auto& v : out.g) v *= s;
  return out;
}

DiracField3D dirac_packets(const Grid& grid, const std::vector<DiracPacket>& packets) {
  require(grid.dim == 3, ErrorKind::kInvalid, "grid", "Dirac packets need a 3D grid");
  const std::size_t n = grid.cells();
  DiracField3D out{grid, {Field(n), Field(n), Field(n), Field(n)}};
  for (const auto& p : packets) {
    require(p.width > 0, ErrorKind::kInvalid, "initial.packets.width", "packet width must be positive");
    for (std::size_t q = 0; q < n; ++q) {
      std::size_t rem = q;
      double r2 = 0.0, phase = 0.0;
      for (int a = 2; a >= 0; --a) {
        const int i = static_cast<int>(rem % grid.points[a]);
        rem /= grid.points[a];
        const double d = grid.wrap(a, grid.coord(a, i) - p.center(a));
        r2 += d * d;
        phase += p.momentum(a) * d;
      }
      const cplx w = std::exp(-r2 / (4.0 * p.width * p.width)) * std::exp(I * phase);
      for (int c = 0; c < 4; ++c) out.psi[c][q] += w * p.spinor(c);
    }
  }
  double norm = 0.0;
  for (const auto& c : out.psi)
    for (const auto& v : c) norm += std::norm(v);
  norm *= grid.cell_volume();
  require(norm > 0, ErrorKind::kInvalid, "initial", "initial state has zero norm");
  const double s = 1.0 / std::sqrt(norm);
  for (auto& c : out.psi)
    for (auto& v : c) v *= s;
  return out;
}

ChiralField1D chiral_rest_superposition(const Grid& grid, cplx a, cplx b) {
  require(std::abs(std::norm(a) + std::norm(b) - 1.0) < 1e-12, ErrorKind::kInvalid, "initial.a",
          "rest superposition needs |a|^2 + |b|^2 = 1");
  const double r = 1.0 / std::sqrt(2.0);
  // Normalized over the box: amplitude 1/sqrt(L).
  const double amp = 1.0 / std::sqrt(grid.extent[0]);
  return ChiralField1D{grid, Field(grid.cells(), amp * r * (a + b)), Field(grid.cells(), amp * r * (a - b))};
}

WaveRecord evolve_1d(const ChiralField1D& initial, double m, double t_final, double dt, std::size_t cap_bytes) {
  const Grid& grid = initial.grid;
  require(grid.dim == 1, ErrorKind::kInvalid, "grid", "evolve_1d needs a 1D grid");
  grid.validate(2 * sizeof(cplx), cap_bytes);
  require(m >= 0 && std::isfinite(m), ErrorKind::kInvalid, "mass", "mass must be non-negative");
  require(initial.f.size() == grid.cells() && initial.g.size() == grid.cells(), ErrorKind::kInvalid, "initial",
          "field size does not match grid");
  require_finite(initial.f, "initial.f");
  require_finite(initial.g, "initial.g");
  const int frames = frame_count(t_final, dt);
  require(dt <= grid.spacing(0) * (1 + 1e-12), ErrorKind::kInvalid, "dt", "dt must not exceed the grid spacing");

  WaveRecord rec;
  rec.kind = "dirac1d";
  rec.grid = grid;
  rec.components = 2;
  rec.component_names = {"f", "g"};
  rec.mass = m;
  rec.stride = dt;
  rec.frames = frames;
  rec.allocate(cap_bytes);

  const std::size_t n = grid.cells();
  FFT fft(grid, 2);
  Field spec0(2 * n);
  std::copy(initial.f.begin(), initial.f.end(), spec0.begin());
  std::copy(initial.g.begin(), initial.g.end(), spec0.begin() + n);
  fft.forward(spec0.data());
  const auto k = grid.wavenumbers(0);

  for (int fr = 0; fr < frames; ++fr) {
    const double t = rec.time(fr);
    cplx* out = rec.frame(fr);
    for (std::size_t q = 0; q < n; ++q) {
      const double E = std::hypot(k[q], m);
      const double c = std::cos(E * t);
      const double s = sinc_t(E, t);
      const cplx f0 = spec0[q], g0 = spec0[n + q];
      out[q] = c * f0 - I * s * (k[q] * f0 + m * g0);
      out[n + q] = c * g0 - I * s * (m * f0 - k[q] * g0);
    }
    fft.backward(out);
  }
  return rec;
}

WaveRecord evolve_3d(const DiracField3D& initial, double m, double t_final, double dt, std::size_t cap_bytes) {
  const Grid& grid = initial.grid;
  require(grid.dim == 3, ErrorKind::kInvalid, "grid", "evolve_3d needs a 3D grid");
  grid.validate(4 * sizeof(cplx), cap_bytes);
  require(m >= 0 && std::isfinite(m), ErrorKind::kInvalid, "mass", "mass must be non-negative");
  for (const auto& c : initial.psi) {
    require(c.size() == grid.cells(), ErrorKind::kInvalid, "initial", "field size does not match grid");
    require_finite(c, "initial.psi");
  }
  const int frames = frame_count(t_final, dt);
  require(dt <= grid.min_spacing() * (1 + 1e-12), ErrorKind::kInvalid, "dt", "dt must not exceed the grid spacing");

  WaveRecord rec;
  rec.kind = "dirac3d";
  rec.grid = grid;
  rec.components = 4;
  rec.component_names = {"phi1", "phi2", "chi1", "chi2"};
  rec.mass = m;
  rec.stride = dt;
  rec.frames = frames;
  rec.allocate(cap_bytes);

  const std::size_t n = grid.cells();
  FFT fft(grid, 4);
  Field spec0(4 * n);
  for (int c = 0; c < 4; ++c) std::copy(initial.psi[c].begin(), initial.psi[c].end(), spec0.begin() + c * n);
  fft.forward(spec0.data());
  const auto kx = grid.wavenumbers(0), ky = grid.wavenumbers(1), kz = grid.wavenumbers(2);
  const std::size_t n1 = grid.points[1], n2 = grid.points[2];

  for (int fr = 0; fr < frames; ++fr) {
    const double t = rec.time(fr);
    cplx* out = rec.frame(fr);
    for (std::size_t q = 0; q < n; ++q) {
      const double px = kx[q / (n1 * n2)], py = ky[(q / n2) % n1], pz = kz[q % n2];
      const double E = std::sqrt(px * px + py * py + pz * pz + m * m);
      const double c = std::cos(E * t);
      const double s = sinc_t(E, t);
      const cplx u1 = spec0[q], u2 = spec0[n + q], l1 = spec0[2 * n + q], l2 = spec0[3 * n + q];
      // sigma.p applied to a 2-spinor (a, b).
      const cplx pm(px, -py), pp(px, py);
      const cplx sl1 = pz * l1 + pm * l2, sl2 = pp * l1 - pz * l2;
      const cplx su1 = pz * u1 + pm * u2, su2 = pp * u1 - pz * u2;
      const cplx h0 = m * u1 + sl1, h1 = m * u2 + sl2, h2 = su1 - m * l1, h3 = su2 - m * l2;
      out[q] = c * u1 - I * s * h0;
      out[n + q] = c * u2 - I * s * h1;
      out[2 * n + q] = c * l1 - I * s * h2;
      out[3 * n + q] = c * l2 - I * s * h3;
    }
    fft.backward(out);
  }
  return rec;
}

Dirac rest_superposition_fixture(cplx a, cplx b, const Weyl& chi, double m, double t) {
  require(std::abs(std::norm(a) + std::norm(b) - 1.0) < 1e-12, ErrorKind::kInvalid, "a",
          "rest superposition needs |a|^2 + |b|^2 = 1");
  require(std::abs(chi.squaredNorm() - 1.0) < 1e-12, ErrorKind::kInvalid, "chi", "chi must be normalized");
  const cplx ep = std::exp(-I * (m * t)), en = std::exp(I * (m * t));
  const double r = 1.0 / std::sqrt(2.0);
  const Weyl phi_R = r * (a * ep + b * en) * chi;
  const Weyl phi_L = r * (a * ep - b * en) * chi;
  return assemble(phi_R, phi_L);
}

ChiralPair chiral_pair_from_components(const WaveRecord& rec, const cplx* comps) {
  if (rec.kind == "dirac1d") return ChiralPair{Weyl(comps[0], 0.0), Weyl(comps[1], 0.0)};
  require(rec.kind == "dirac3d", ErrorKind::kInvalid, "record", "not a single-particle Dirac record");
  Dirac psi;
  psi << comps[0], comps[1], comps[2], comps[3];
  return chiral_decompose(psi);
}

ChiralPair record_chiral_pair(const WaveRecord& rec, int frame, std::size_t cell) {
  cplx c[4];
  for (int i = 0; i < rec.components; ++i) c[i] = rec.component(frame, i)[cell];
  return chiral_pair_from_components(rec, c);
}

namespace {

struct CurrentFrame {
  RealField rho_R, rho_L, F;
  std::array<RealField, 3> j_R, j_L;
};

CurrentFrame currents_of(const WaveRecord& rec, int fr, double m) {
  const std::size_t n = rec.grid.cells();
  CurrentFrame c;
  c.rho_R.resize(n);
  c.rho_L.resize(n);
  c.F.resize(n);
  for (int a = 0; a < 3; ++a) {
    c.j_R[a].resize(n);
    c.j_L[a].resize(n);
  }
  for (std::size_t q = 0; q < n; ++q) {
    const ChiralPair p = record_chiral_pair(rec, fr, q);
    const ChiralCurrents cur = chiral_currents(p.right, p.left);
    c.rho_R[q] = cur.rho_R;
    c.rho_L[q] = cur.rho_L;
    c.F[q] = coupling_F(p.right, p.left, m);
    if (rec.kind == "dirac1d") {
      // The single grid axis is physical z.
      c.j_R[0][q] = cur.j_R(2);
      c.j_L[0][q] = cur.j_L(2);
    } else {
      for (int a = 0; a < 3; ++a) {
        c.j_R[a][q] = cur.j_R(a);
        c.j_L[a][q] = cur.j_L(a);
      }
    }
  }
  return c;
}

}  // namespace

DivergenceResidual divergence_residual(const WaveRecord& rec, double m) {
  require(rec.frames >= 3, ErrorKind::kInvalid, "record", "divergence residual needs at least 3 frames");
  Spectral sp(rec.grid);
  DivergenceResidual res;
  const std::size_t n = rec.grid.cells();
  CurrentFrame prev = currents_of(rec, 0, m);
  CurrentFrame cur = currents_of(rec, 1, m);
  for (int fr = 1; fr + 1 < rec.frames; ++fr) {
    CurrentFrame next = currents_of(rec, fr + 1, m);
    const RealField divR = sp.divergence({&cur.j_R[0], &cur.j_R[1], &cur.j_R[2]});
    const RealField divL = sp.divergence({&cur.j_L[0], &cur.j_L[1], &cur.j_L[2]});
    const double inv = 1.0 / (2.0 * rec.stride);
    for (std::size_t q = 0; q < n; ++q) {
      const double dR = (next.rho_R[q] - prev.rho_R[q]) * inv;
      const double dL = (next.rho_L[q] - prev.rho_L[q]) * inv;
      res.right = std::max(res.right, std::abs(dR + divR[q] - cur.F[q]));
      res.left = std::max(res.left, std::abs(dL + divL[q] + cur.F[q]));
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return res;
}

double record_norm(const WaveRecord& rec, int frame) {
  double s = 0.0;
  const cplx* f = rec.frame(frame);
  for (std::size_t i = 0; i < rec.frame_size(); ++i) s += std::norm(f[i]);
  return s * rec.grid.cell_volume();
}

}  // namespace zigzag
