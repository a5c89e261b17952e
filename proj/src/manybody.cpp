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

#include "zigzag/manybody.hpp"

#include <algorithm>
#include <cmath>

#include "zigzag/error.hpp"
#include "zigzag/fft.hpp"
#include "zigzag/models.hpp"

namespace zigzag {

namespace {

const cplx I(0.0, 1.0);

int spin_of(int a, int particle) { return particle == 0 ? a >> 1 : a & 1; }
double spin_sign(int a, int particle) { return spin_of(a, particle) == 0 ? 1.0 : -1.0; }

// exp(-i h t) for h = [[s k, m], [m, -s k]] acting on chirality (R, L).
Eigen::Matrix2cd chirality_propagator(double sk, double m, double t) {
  const double E = std::hypot(sk, m);
  const double c = std::cos(E * t);
  const double s = E > 0 ? std::sin(E * t) / E : t;
  Eigen::Matrix2cd u;
  u << c - I * s * sk, -I * s * m, -I * s * m, c + I * s * sk;
  return u;
}

}  // namespace

std::string sector_name(int sector) {
  return std::string(1, sector_chirality(sector, 0) == 0 ? 'R' : 'L') +
         std::string(1, sector_chirality(sector, 1) == 0 ? 'R' : 'L');
}

ParticleSpinor1D particle_from_chiral(const ChiralField1D& f) {
  const std::size_t n = f.grid.cells();
  return ParticleSpinor1D{f.grid, {f.f, Field(n, 0.0), f.g, Field(n, 0.0)}};
}

SectorField2P product_state(const ParticleSpinor1D& a, const ParticleSpinor1D& b) {
  require(a.grid == b.grid && a.grid.dim == 1, ErrorKind::kInvalid, "initial",
          "product state needs two factors on the same 1D grid");
  const int N = a.grid.points[0];
  SectorField2P out{Grid::square(N, a.grid.extent[0]), {}};
  for (int comp = 0; comp < kComponents2P; ++comp) {
    const int c = comp / 4, s = comp % 4;
    const Field& fa = a.u[2 * sector_chirality(c, 0) + spin_of(s, 0)];
    const Field& fb = b.u[2 * sector_chirality(c, 1) + spin_of(s, 1)];
    Field& dst = out.phi[comp];
    dst.resize(out.grid.cells());
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) dst[static_cast<std::size_t>(i) * N + j] = fa[i] * fb[j];
  }
  return out;
}

SectorField2P entangled_packets(const Grid& line, const EntangledSpec& spec) {
  require(line.dim == 1, ErrorKind::kInvalid, "grid", "two-particle grids are given per particle as 1D");
  require(spec.width > 0, ErrorKind::kInvalid, "initial.width", "packet width must be positive");
  const int N = line.points[0];
  SectorField2P out{Grid::square(N, line.extent[0]), {}};
  for (auto& f : out.phi) f.assign(out.grid.cells(), 0.0);
  for (int i = 0; i < N; ++i) {
    const double d1 = line.wrap(0, line.coord(0, i) - spec.center1);
    for (int j = 0; j < N; ++j) {
      const double d2 = line.wrap(0, line.coord(0, j) - spec.center2);
      const cplx env = std::exp(-(d1 * d1 + d2 * d2) / (4 * spec.width * spec.width)) *
                       std::exp(I * (spec.momentum1 * d1 + spec.momentum2 * d2));
      const std::size_t q = static_cast<std::size_t>(i) * N + j;
      for (int c = 0; c < kSectors; ++c) {
        out.phi[4 * c + 0][q] = spec.amp[c] * std::cos(spec.theta[c]) * env;
        out.phi[4 * c + 3][q] = spec.amp[c] * std::sin(spec.theta[c]) * env;
      }
    }
  }
  normalize(out);
  return out;
}

SectorField2P exchange(const SectorField2P& f) {
  const int N = f.grid.points[0];
  SectorField2P out{f.grid, {}};
  for (int comp = 0; comp < kComponents2P; ++comp) {
    const int c = comp / 4, s = comp % 4;
    const int src = 4 * sector_of(sector_chirality(c, 1), sector_chirality(c, 0)) + 2 * spin_of(s, 1) + spin_of(s, 0);
    out.phi[comp].resize(f.grid.cells());
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        out.phi[comp][static_cast<std::size_t>(i) * N + j] = f.phi[src][static_cast<std::size_t>(j) * N + i];
  }
  return out;
}

SectorField2P antisymmetrize(const SectorField2P& f) {
  SectorField2P out = exchange(f);
  for (int comp = 0; comp < kComponents2P; ++comp)
    for (std::size_t q = 0; q < out.phi[comp].size(); ++q) out.phi[comp][q] = f.phi[comp][q] - out.phi[comp][q];
  normalize(out);
  return out;
}

double norm_2p(const SectorField2P& f) {
  double s = 0.0;
  for (const auto& c : f.phi)
    for (const auto& v : c) s += std::norm(v);
  return s * f.grid.cell_volume();
}

void normalize(SectorField2P& f) {
  const double n = norm_2p(f);
  require(n > 0, ErrorKind::kInvalid, "initial", "two-particle state has zero norm");
  const double s = 1.0 / std::sqrt(n);
  for (auto& c : f.phi)
    for (auto& v : c) v *= s;
}

WaveRecord evolve_2p(const SectorField2P& initial, double m, double t_final, double dt, std::size_t cap_bytes) {
  const Grid& grid = initial.grid;
  require(grid.dim == 2 && grid.points[0] == grid.points[1] && grid.extent[0] == grid.extent[1],
          ErrorKind::kInvalid, "grid", "two-particle grid must be square over (z1, z2)");
  grid.validate(kComponents2P * sizeof(cplx), cap_bytes);
  require(m >= 0 && std::isfinite(m), ErrorKind::kInvalid, "mass", "mass must be non-negative");
  for (const auto& c : initial.phi) {
    require(c.size() == grid.cells(), ErrorKind::kInvalid, "initial", "field size does not match grid");
    require_finite(c, "initial");
  }
  require(std::abs(norm_2p(initial) - 1.0) < 1e-8, ErrorKind::kInvalid, "initial", "initial state must have unit norm");
  const int frames = frame_count(t_final, dt);
  require(dt <= grid.spacing(0) * (1 + 1e-12), ErrorKind::kInvalid, "dt", "dt must not exceed the grid spacing");

  WaveRecord rec;
  rec.kind = "twoparticle";
  rec.grid = grid;
  rec.components = kComponents2P;
  for (int comp = 0; comp < kComponents2P; ++comp) {
    const int s = comp % 4;
    rec.component_names.push_back(sector_name(comp / 4) + "_" + (spin_of(s, 0) ? "d" : "u") +
                                  (spin_of(s, 1) ? "d" : "u"));
  }
  rec.mass = m;
  rec.stride = dt;
  rec.frames = frames;
  rec.allocate(cap_bytes);

  const std::size_t n = grid.cells();
  const int N = grid.points[0];
  FFT fft(grid, kComponents2P);
  Field spec0(kComponents2P * n);
  for (int comp = 0; comp < kComponents2P; ++comp)
    std::copy(initial.phi[comp].begin(), initial.phi[comp].end(), spec0.begin() + comp * n);
  fft.forward(spec0.data());
  const auto k = grid.wavenumbers(0);

  // The generator is h1 + h2 with commuting single-particle parts, so each
  // Fourier mode evolves by the exact product of 2x2 chirality rotations.
  for (int fr = 0; fr < frames; ++fr) {
    const double t = rec.time(fr);
    cplx* out = rec.frame(fr);
    for (int i = 0; i < N; ++i) {
      const Eigen::Matrix2cd U1[2] = {chirality_propagator(k[i], m, t), chirality_propagator(-k[i], m, t)};
      for (int j = 0; j < N; ++j) {
        const Eigen::Matrix2cd U2[2] = {chirality_propagator(k[j], m, t), chirality_propagator(-k[j], m, t)};
        const std::size_t q = static_cast<std::size_t>(i) * N + j;
        cplx v[kComponents2P], w[kComponents2P];
        for (int comp = 0; comp < kComponents2P; ++comp) v[comp] = spec0[comp * n + q];
        // Particle 1: mixes c1 at fixed (c2, spins); the spin of particle 1 picks the sign of k.
        for (int comp = 0; comp < kComponents2P; ++comp) {
          const int c = comp / 4, s = comp % 4;
          const int c1 = sector_chirality(c, 0), c2 = sector_chirality(c, 1);
          const auto& U = U1[spin_of(s, 0)];
          w[comp] = U(c1, 0) * v[4 * sector_of(0, c2) + s] + U(c1, 1) * v[4 * sector_of(1, c2) + s];
        }
        for (int comp = 0; comp < kComponents2P; ++comp) {
          const int c = comp / 4, s = comp % 4;
          const int c1 = sector_chirality(c, 0), c2 = sector_chirality(c, 1);
          const auto& U = U2[spin_of(s, 1)];
          out[comp * n + q] = U(c2, 0) * w[4 * sector_of(c1, 0) + s] + U(c2, 1) * w[4 * sector_of(c1, 1) + s];
        }
      }
    }
    fft.backward(out);
  }
  return rec;
}

double sector_density(const Block2P& phi, int sector) {
  double r = 0.0;
  for (int s = 0; s < 4; ++s) r += std::norm(phi[4 * sector + s]);
  return r;
}

Velocity2P velocities_2p(const Block2P& phi, int sector, double floor) {
  Velocity2P out;
  const double rho = sector_density(phi, sector);
  if (!(rho > floor) || rho <= 0.0) {
    out.degenerate = true;
    return out;
  }
  double s1 = 0.0, s2 = 0.0;
  for (int s = 0; s < 4; ++s) {
    const double w = std::norm(phi[4 * sector + s]);
    s1 += spin_sign(s, 0) * w;
    s2 += spin_sign(s, 1) * w;
  }
  const double sign1 = sector_chirality(sector, 0) == 0 ? 1.0 : -1.0;
  const double sign2 = sector_chirality(sector, 1) == 0 ? 1.0 : -1.0;
  out.v1 = sign1 * s1 / rho;
  out.v2 = sign2 * s2 / rho;
  return out;
}

double rates_2p(const Block2P& phi, int sector, int particle, double m, const NodePolicy& policy) {
  const int target = flip_sector(sector, particle);
  cplx overlap = 0.0;
  for (int s = 0; s < 4; ++s) overlap += std::conj(phi[4 * target + s]) * phi[4 * sector + s];
  return capped_rate(2.0 * m * overlap.imag(), sector_density(phi, sector), policy);
}

Block2P record_block(const WaveRecord& rec, int frame, std::size_t cell) {
  Block2P b;
  for (int comp = 0; comp < kComponents2P; ++comp) b[comp] = rec.component(frame, comp)[cell];
  return b;
}

std::array<double, kSectors> sector_populations(const WaveRecord& rec, int frame) {
  std::array<double, kSectors> p{};
  for (int comp = 0; comp < kComponents2P; ++comp) {
    const cplx* f = rec.component(frame, comp);
    for (std::size_t q = 0; q < rec.grid.cells(); ++q) p[comp / 4] += std::norm(f[q]);
  }
  for (auto& v : p) v *= rec.grid.cell_volume();
  return p;
}

double antisymmetry_residual(const WaveRecord& rec) {
  require(rec.kind == "twoparticle", ErrorKind::kInvalid, "record", "not a two-particle record");
  double worst = 0.0;
  SectorField2P f{rec.grid, {}};
  for (int fr = 0; fr < rec.frames; ++fr) {
    for (int comp = 0; comp < kComponents2P; ++comp) {
      const cplx* src = rec.component(fr, comp);
      f.phi[comp].assign(src, src + rec.grid.cells());
    }
    const SectorField2P e = exchange(f);
    for (int comp = 0; comp < kComponents2P; ++comp)
      for (std::size_t q = 0; q < rec.grid.cells(); ++q)
        worst = std::max(worst, std::abs(f.phi[comp][q] + e.phi[comp][q]));
  }
  return worst;
}

double sector_balance_residual(const WaveRecord& rec) {
  require(rec.kind == "twoparticle" && rec.frames >= 3, ErrorKind::kInvalid, "record",
          "sector balance needs a two-particle record with at least 3 frames");
  const std::size_t n = rec.grid.cells();
  const double m = rec.mass;
  Spectral sp(rec.grid);
  auto densities = [&](int fr) {
    std::vector<RealField> rho(kSectors, RealField(n, 0.0));
    for (int comp = 0; comp < kComponents2P; ++comp) {
      const cplx* f = rec.component(fr, comp);
      for (std::size_t q = 0; q < n; ++q) rho[comp / 4][q] += std::norm(f[q]);
    }
    return rho;
  };
  double worst = 0.0;
  for (int fr = 1; fr + 1 < rec.frames; ++fr) {
    const auto prev = densities(fr - 1), next = densities(fr + 1);
    for (int c = 0; c < kSectors; ++c) {
      RealField j1(n, 0.0), j2(n, 0.0), src(n, 0.0);
      const double s1 = sector_chirality(c, 0) == 0 ? 1.0 : -1.0;
      const double s2 = sector_chirality(c, 1) == 0 ? 1.0 : -1.0;
      for (int s = 0; s < 4; ++s) {
        const cplx* f = rec.component(fr, 4 * c + s);
        const cplx* g1 = rec.component(fr, 4 * flip_sector(c, 0) + s);
        const cplx* g2 = rec.component(fr, 4 * flip_sector(c, 1) + s);
        for (std::size_t q = 0; q < n; ++q) {
          const double w = std::norm(f[q]);
          j1[q] += s1 * spin_sign(s, 0) * w;
          j2[q] += s2 * spin_sign(s, 1) * w;
          src[q] += 2.0 * m * (std::conj(f[q]) * (g1[q] + g2[q])).imag();
        }
      }
      const RealField div = sp.divergence({&j1, &j2, nullptr});
      for (std::size_t q = 0; q < n; ++q) {
        const double dt = (next[c][q] - prev[c][q]) / (2.0 * rec.stride);
        worst = std::max(worst, std::abs(dt + div[q] - src[q]));
      }
    }
  }
  return worst;
}

double max_speed_2p(const WaveRecord& rec, int frame) {
  double vmax = 0.0;
  double mean = 0.0;
  for (double p : sector_populations(rec, frame)) mean += p;
  const double floor = 1e-12 * mean / rec.grid.cells() / rec.grid.cell_volume();
  for (std::size_t q = 0; q < rec.grid.cells(); ++q) {
    const Block2P b = record_block(rec, frame, q);
    for (int c = 0; c < kSectors; ++c) {
      const Velocity2P v = velocities_2p(b, c, floor);
      if (!v.degenerate) vmax = std::max({vmax, std::abs(v.v1), std::abs(v.v2)});
    }
  }
  return vmax;
}

TwoParticleModel::TwoParticleModel(std::shared_ptr<const WaveRecord> record) : rec_(std::move(record)) {
  require(rec_->kind == "twoparticle", ErrorKind::kInvalid, "model", "two-particle model needs a twoparticle record");
  require(rec_->frames >= 2, ErrorKind::kInvalid, "t_final", "record needs at least two frames");
  double s = 0.0;
  const cplx* f = rec_->frame(0);
  for (std::size_t i = 0; i < rec_->frame_size(); ++i) s += std::norm(f[i]);
  policy_ = default_node_policy(s / static_cast<double>(rec_->grid.cells()), rec_->mass);
}

GuidanceEval TwoParticleModel::evaluate(const double* x, double t, int label) const {
  Block2P b;
  rec_->sample(x, t, b.data());
  const Velocity2P v = velocities_2p(b, label, policy_.floor);
  GuidanceEval e;
  e.degenerate = v.degenerate;
  e.v[0] = v.v1;
  e.v[1] = v.v2;
  e.channels = 2;
  bool minimal = true;
  for (int i = 0; i < 2; ++i) {
    const int target = flip_sector(label, i);
    e.jump[i] = JumpChannel{target, rates_2p(b, label, i, rec_->mass, policy_)};
    minimal = minimal && e.jump[i].rate * rates_2p(b, target, i, rec_->mass, policy_) == 0.0;
  }
  e.minimal = minimal;
  e.speed_excess = std::max({0.0, std::abs(v.v1) - 1.0, std::abs(v.v2) - 1.0});
  return e;
}

std::vector<RealField> TwoParticleModel::label_densities(double t) const {
  const int k = rec_->frame_at(t);
  const std::size_t n = rec_->grid.cells();
  std::vector<RealField> out(kSectors, RealField(n, 0.0));
  for (int comp = 0; comp < kComponents2P; ++comp) {
    const cplx* f = rec_->component(k, comp);
    for (std::size_t q = 0; q < n; ++q) out[comp / 4][q] += std::norm(f[q]);
  }
  return out;
}

}  // namespace zigzag
