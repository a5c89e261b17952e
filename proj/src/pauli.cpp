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

#include "zigzag/pauli.hpp"

#include <cmath>
#include <numbers>

#include "zigzag/error.hpp"

namespace zigzag {

namespace {

const cplx I(0.0, 1.0);

std::array<double, 3> physical_coords(const Grid& g, std::size_t q) {
  std::array<double, 3> r{0.0, 0.0, 0.0};
  std::size_t rem = q;
  for (int a = g.dim - 1; a >= 0; --a) {
    const int i = static_cast<int>(rem % g.points[a]);
    rem /= g.points[a];
    r[physical_axis(g, a)] = g.coord(a, i);
  }
  return r;
}

}  // namespace

int physical_axis(const Grid& g, int grid_axis) {
  if (g.dim == 1) return 2;
  if (g.dim == 2) return grid_axis + 1;
  return grid_axis;
}

int grid_axis_of(const Grid& g, int physical) {
  for (int a = 0; a < g.dim; ++a)
    if (physical_axis(g, a) == physical) return a;
  return -1;
}

nlohmann::json to_json(const PotentialSpec& p) {
  nlohmann::json j;
  j["preset"] = p.preset;
  if (p.preset == "uniform_b") j["b"] = {p.b(0), p.b(1), p.b(2)};
  if (p.preset == "linear_v") j["field"] = p.field;
  if (p.preset == "gaussian_bump") {
    j["height"] = p.height;
    j["width"] = p.width;
    j["center"] = {p.center(0), p.center(1), p.center(2)};
  }
  if (p.preset == "periodic_a") j["amplitude"] = p.amplitude;
  return j;
}

PotentialSpec potential_from_json(const nlohmann::json& j) {
  PotentialSpec p;
  p.preset = j.value("preset", "none");
  auto vec = [&](const char* key, Vec3& out) {
    if (!j.contains(key)) return;
    const auto& a = j.at(key);
    require(a.is_array() && a.size() == 3, ErrorKind::kInvalid, std::string("potential.") + key,
            "expected a 3-vector");
    for (int i = 0; i < 3; ++i) out(i) = a[i].get<double>();
  };
  vec("b", p.b);
  vec("center", p.center);
  p.field = j.value("field", 0.0);
  p.height = j.value("height", 0.0);
  p.width = j.value("width", 1.0);
  p.amplitude = j.value("amplitude", 0.0);
  return p;
}

Potentials make_potentials(const Grid& grid, const PotentialSpec& spec) {
  require(grid.dim == 1 || grid.dim == 2, ErrorKind::kInvalid, "grid", "Pauli grids are 1D (z) or 2D (y, z)");
  const std::size_t n = grid.cells();
  Potentials p;
  p.spec = spec;
  p.V.assign(n, 0.0);
  for (int a = 0; a < 3; ++a) {
    p.A[a].assign(n, 0.0);
    p.E[a].assign(n, 0.0);
    p.B[a].assign(n, 0.0);
  }
  if (spec.preset == "none") return p;
  if (spec.preset == "uniform_b") {
    for (int a = 0; a < 3; ++a) p.B[a].assign(n, spec.b(a));
    p.zeeman_only = true;
    return p;
  }
  if (spec.preset == "linear_v") {
    for (std::size_t q = 0; q < n; ++q) {
      p.V[q] = -spec.field * physical_coords(grid, q)[2];
      p.E[2][q] = spec.field;
    }
    return p;
  }
  if (spec.preset == "gaussian_bump") {
    require(spec.width > 0, ErrorKind::kInvalid, "potential.width", "bump width must be positive");
    for (std::size_t q = 0; q < n; ++q) {
      const auto r = physical_coords(grid, q);
      std::array<double, 3> d{};
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        const int ga = grid_axis_of(grid, a);
        d[a] = ga >= 0 ? grid.wrap(ga, r[a] - spec.center(a)) : 0.0;
        r2 += d[a] * d[a];
      }
      const double v = spec.height * std::exp(-r2 / (2 * spec.width * spec.width));
      p.V[q] = v;
      for (int a = 0; a < 3; ++a) p.E[a][q] = v * d[a] / (spec.width * spec.width);
    }
    return p;
  }
  if (spec.preset == "periodic_a") {
    const double L = grid.extent[grid_axis_of(grid, 2)];
    const double k = 2 * std::numbers::pi / L;
    for (std::size_t q = 0; q < n; ++q) {
      const double z = physical_coords(grid, q)[2];
      p.A[0][q] = spec.amplitude * std::sin(k * z);
      p.B[1][q] = spec.amplitude * k * std::cos(k * z);
    }
    p.has_vector_potential = true;
    return p;
  }
  throw Error(ErrorKind::kInvalid, "potential.preset", "unknown potential preset '" + spec.preset + "'");
}

Spinor2Field pauli_packets(const Grid& grid, const std::vector<PauliGaussian>& packets) {
  const std::size_t n = grid.cells();
  Spinor2Field out{Field(n, 0.0), Field(n, 0.0)};
  for (const auto& pk : packets) {
    require(pk.width > 0, ErrorKind::kInvalid, "initial.width", "packet width must be positive");
    require(pk.spin.squaredNorm() > 0, ErrorKind::kInvalid, "initial.spin", "spin spinor must be nonzero");
    const Weyl xi = pk.spin.normalized();
    for (std::size_t q = 0; q < n; ++q) {
      const auto r = physical_coords(grid, q);
      double r2 = 0.0, phase = 0.0;
      for (int a = 0; a < 3; ++a) {
        const int ga = grid_axis_of(grid, a);
        if (ga < 0) continue;
        const double d = grid.wrap(ga, r[a] - pk.center(a));
        r2 += d * d;
        phase += pk.momentum(a) * d;
      }
      const cplx env = std::exp(-r2 / (4 * pk.width * pk.width)) * std::exp(I * phase);
      out[0][q] += env * xi(0);
      out[1][q] += env * xi(1);
    }
  }
  double norm = 0.0;
  for (std::size_t q = 0; q < n; ++q) norm += std::norm(out[0][q]) + std::norm(out[1][q]);
  norm *= grid.cell_volume();
  require(norm > 0, ErrorKind::kInvalid, "initial", "initial state has zero norm");
  for (auto& c : out)
    for (auto& v : c) v /= std::sqrt(norm);
  return out;
}

PauliOps::PauliOps(const Grid& grid, const Potentials& pot, double mass, double charge)
    : grid_(grid), pot_(pot), m_(mass), e_(charge), sp_(grid) {
  require(mass > 0, ErrorKind::kInvalid, "mass", "Pauli mass must be positive");
}

Field PauliOps::d(const Field& f, int physical) const {
  const int a = grid_axis_of(grid_, physical);
  if (a < 0) return Field(f.size(), 0.0);
  return sp_.derivative(f, a);
}

RealField PauliOps::d(const RealField& f, int physical) const {
  const int a = grid_axis_of(grid_, physical);
  if (a < 0) return RealField(f.size(), 0.0);
  return sp_.derivative(f, a);
}

Spinor2Field PauliOps::D(const Spinor2Field& phi, int physical) const {
  Spinor2Field out{d(phi[0], physical), d(phi[1], physical)};
  if (pot_.has_vector_potential) {
    const RealField& A = pot_.A[physical];
    for (int s = 0; s < 2; ++s)
      for (std::size_t q = 0; q < A.size(); ++q) out[s][q] -= I * (e_ * A[q]) * phi[s][q];
  }
  return out;
}

Spinor2Field PauliOps::sigma_dot_D(const Spinor2Field& phi) const {
  const Spinor2Field dx = D(phi, 0), dy = D(phi, 1), dz = D(phi, 2);
  const std::size_t n = phi[0].size();
  Spinor2Field out{Field(n), Field(n)};
  for (std::size_t q = 0; q < n; ++q) {
    out[0][q] = dz[0][q] + dx[1][q] - I * dy[1][q];
    out[1][q] = dx[0][q] + I * dy[0][q] - dz[1][q];
  }
  return out;
}

Spinor2Field PauliOps::hamiltonian(const Spinor2Field& phi) const {
  const std::size_t n = phi[0].size();
  Spinor2Field out{Field(n, 0.0), Field(n, 0.0)};
  for (int a = 0; a < 3; ++a) {
    const Spinor2Field dd = D(D(phi, a), a);
    for (int s = 0; s < 2; ++s)
      for (std::size_t q = 0; q < n; ++q) out[s][q] -= dd[s][q] / (2 * m_);
  }
  const double z = e_ / (2 * m_);
  for (std::size_t q = 0; q < n; ++q) {
    const cplx u = phi[0][q], w = phi[1][q];
    const double bx = pot_.B[0][q], by = pot_.B[1][q], bz = pot_.B[2][q];
    out[0][q] += -z * (bz * u + cplx(bx, -by) * w) + e_ * pot_.V[q] * u;
    out[1][q] += -z * (cplx(bx, by) * u - bz * w) + e_ * pot_.V[q] * w;
  }
  return out;
}

RealField PauliOps::div(const std::array<RealField, 3>& v) const {
  RealField out(grid_.cells(), 0.0);
  for (int a = 0; a < 3; ++a) {
    if (grid_axis_of(grid_, a) < 0) continue;
    const RealField da = d(v[a], a);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] += da[q];
  }
  return out;
}

std::array<RealField, 3> PauliOps::curl(const std::array<RealField, 3>& v) const {
  std::array<RealField, 3> out;
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    const RealField dbc = d(v[c], b), dcb = d(v[b], c);
    out[a].resize(grid_.cells());
    for (std::size_t q = 0; q < out[a].size(); ++q) out[a][q] = dbc[q] - dcb[q];
  }
  return out;
}

WaveRecord pauli_evolve(const PauliField& init, double t_final, double dt, std::size_t cap_bytes) {
  const Grid& grid = init.grid;
  require(grid.dim == 1 || grid.dim == 2, ErrorKind::kInvalid, "grid", "Pauli grids are 1D (z) or 2D (y, z)");
  grid.validate(2 * sizeof(cplx), cap_bytes);
  require(init.mass > 0 && std::isfinite(init.mass), ErrorKind::kInvalid, "mass", "Pauli mass must be positive");
  for (const auto& c : init.phi) {
    require(c.size() == grid.cells(), ErrorKind::kInvalid, "initial", "field size does not match grid");
    require_finite(c, "initial");
  }
  const Potentials& pot = init.pot;
  const double m = init.mass, e = init.charge;
  // D^2 = Laplacian - e^2 |A|^2 holds only when A has no component along resolved axes.
  for (int a = 0; a < grid.dim; ++a)
    for (double v : pot.A[physical_axis(grid, a)])
      require(v == 0.0, ErrorKind::kInvalid, "potential", "vector potential must be orthogonal to the grid axes");
  const int frames = frame_count(t_final, dt);
  const std::size_t n = grid.cells();
  double emax = 0.0;
  std::vector<double> scalar(n);
  for (std::size_t q = 0; q < n; ++q) {
    double a2 = 0.0, b2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      a2 += pot.A[a][q] * pot.A[a][q];
      b2 += pot.B[a][q] * pot.B[a][q];
    }
    scalar[q] = e * pot.V[q] + e * e * a2 / (2 * m);
    emax = std::max(emax, std::abs(scalar[q]) + std::abs(e) * std::sqrt(b2) / (2 * m));
  }
  require(dt * emax <= 1.0, ErrorKind::kInvalid, "dt", "dt * max potential energy exceeds 1; reduce dt");

  WaveRecord rec;
  rec.kind = "pauli";
  rec.grid = grid;
  rec.components = 2;
  rec.component_names = {"up", "down"};
  rec.mass = m;
  rec.stride = dt;
  rec.frames = frames;
  rec.meta["charge"] = e;
  rec.meta["potential"] = to_json(pot.spec);
  rec.allocate(cap_bytes);

  // Pointwise half step exp(-i tau (s I - (e/2m) B.sigma)).
  std::vector<Eigen::Matrix2cd> half(n);
  for (std::size_t q = 0; q < n; ++q) {
    Vec3 b(pot.B[0][q], pot.B[1][q], pot.B[2][q]);
    b *= -e / (2 * m);
    const double tau = 0.5 * dt, bn = b.norm();
    Eigen::Matrix2cd M = std::cos(tau * bn) * Eigen::Matrix2cd::Identity();
    if (bn > 0) {
      const Eigen::Matrix2cd bs = b(0) * pauli(0) + b(1) * pauli(1) + b(2) * pauli(2);
      M -= I * std::sin(tau * bn) / bn * bs;
    }
    half[q] = std::exp(-I * (tau * scalar[q])) * M;
  }
  std::vector<cplx> kin(n);
  {
    std::array<std::vector<double>, 3> k;
    for (int a = 0; a < grid.dim; ++a) k[a] = grid.wavenumbers(a);
    for (std::size_t q = 0; q < n; ++q) {
      double k2 = 0.0;
      std::size_t rem = q;
      for (int a = grid.dim - 1; a >= 0; --a) {
        const double ka = k[a][rem % grid.points[a]];
        rem /= grid.points[a];
        k2 += ka * ka;
      }
      kin[q] = std::exp(-I * (k2 * dt / (2 * m)));
    }
  }
  FFT fft(grid, 2);
  Field buf(2 * n);
  std::copy(init.phi[0].begin(), init.phi[0].end(), buf.begin());
  std::copy(init.phi[1].begin(), init.phi[1].end(), buf.begin() + n);
  std::copy(buf.begin(), buf.end(), rec.frame(0));
  auto potential_half = [&]() {
    for (std::size_t q = 0; q < n; ++q) {
      const cplx u = buf[q], w = buf[n + q];
      buf[q] = half[q](0, 0) * u + half[q](0, 1) * w;
      buf[n + q] = half[q](1, 0) * u + half[q](1, 1) * w;
    }
  };
  for (int fr = 1; fr < frames; ++fr) {
    potential_half();
    fft.forward(buf.data());
    for (std::size_t q = 0; q < n; ++q) {
      buf[q] *= kin[q];
      buf[n + q] *= kin[q];
    }
    fft.backward(buf.data());
    potential_half();
    for (const auto& v : buf)
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::kNumerical, "dt",
              "non-finite value during Pauli evolution");
    std::copy(buf.begin(), buf.end(), rec.frame(fr));
  }
  return rec;
}

Potentials record_potentials(const WaveRecord& rec) {
  require(rec.kind == "pauli", ErrorKind::kInvalid, "record", "not a Pauli record");
  return make_potentials(rec.grid, potential_from_json(rec.meta.value("potential", nlohmann::json::object())));
}

PauliField pauli_frame(const WaveRecord& rec, const Potentials& pot, int frame) {
  require(rec.kind == "pauli", ErrorKind::kInvalid, "record", "not a Pauli record");
  const std::size_t n = rec.grid.cells();
  PauliField f;
  f.grid = rec.grid;
  f.mass = rec.mass;
  f.charge = rec.meta.value("charge", 1.0);
  f.pot = pot;
  for (int s = 0; s < 2; ++s) f.phi[s].assign(rec.component(frame, s), rec.component(frame, s) + n);
  return f;
}

}  // namespace zigzag
