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

#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "support/fields.hpp"
#include "zigzag/ensemble.hpp"
#include "zigzag/variations.hpp"

using namespace zigzag;
using zigzag::testing::band_limited;
using zigzag::testing::Gen;

namespace {

const cplx I(0.0, 1.0);

PauliField make_field(const Grid& g, Spinor2Field phi, double m, double e, const PotentialSpec& spec = {}) {
  PauliField f;
  f.grid = g;
  f.phi = std::move(phi);
  f.mass = m;
  f.charge = e;
  f.pot = make_potentials(g, spec);
  return f;
}

ScalarField make_scalar(const Grid& g, Field psi, double m, double e) {
  ScalarField s;
  s.grid = g;
  s.psi = std::move(psi);
  s.mass = m;
  s.charge = e;
  for (int a = 0; a < 3; ++a) s.A[a].assign(g.cells(), 0.0);
  s.U.assign(g.cells(), 0.0);
  return s;
}

RealField real_band_limited(const Grid& g, int band, Gen& gen) {
  const Field f = band_limited(g, band, gen);
  RealField r(f.size());
  for (std::size_t q = 0; q < f.size(); ++q) r[q] = f[q].real();
  return r;
}

PotentialSpec uniform_b(const Vec3& b) {
  PotentialSpec s;
  s.preset = "uniform_b";
  s.b = b;
  return s;
}

}  // namespace

TEST_CASE("spin split exchange examples", "[variations]") {
  const Grid g = Grid::line(16, 8.0);
  const double r = 1.0 / std::sqrt(2.0), m = 1.5, e = 0.7, B = 2.0;
  SECTION("longitudinal field does not exchange") {
    Gen gen(41);
    const auto f = make_field(g, {band_limited(g, 2, gen), band_limited(g, 2, gen)}, m, e, uniform_b(Vec3(0, 0, B)));
    const auto s = spin_split_guidance(f);
    for (double x : s.exchange) CHECK(x == 0.0);
  }
  SECTION("transverse field, real and imaginary relative phase") {
    auto f = make_field(g, {Field(16, r), Field(16, r)}, m, e, uniform_b(Vec3(B, 0, 0)));
    for (double x : spin_split_guidance(f).exchange) CHECK(std::abs(x) < 1e-15);
    f.phi[1] = Field(16, I * r);
    for (double x : spin_split_guidance(f).exchange) CHECK(std::abs(x + e * B / (2 * m)) < 1e-14);
  }
}

TEST_CASE("spin split reduces to de Broglie-Bohm for spin eigenstates", "[variations]") {
  const Grid g = Grid::line(256, 40.0);
  Gen gen(42);
  for (int trial = 0; trial < 10; ++trial) {
    const double m = gen.uniform(0.5, 3.0);
    Weyl xi(gen.complex_normal(), gen.complex_normal());
    xi.normalize();
    Field psi(256);
    const double c0 = gen.uniform(-3, 3), p = gen.uniform(-1, 1);
    for (int i = 0; i < 256; ++i) {
      const double z = g.coord(0, i) - c0;
      psi[i] = std::exp(-z * z / 8.0) * std::exp(I * (p * z + 0.05 * z * z));
    }
    Spinor2Field phi{Field(256), Field(256)};
    for (int i = 0; i < 256; ++i) {
      phi[0][i] = psi[i] * xi(0);
      phi[1][i] = psi[i] * xi(1);
    }
    const auto s = spin_split_guidance(make_field(g, phi, m, 1.0));
    const auto dbb = dbb_velocity(make_scalar(g, psi, m, 1.0));
    double rmax = 0.0;
    for (double v : s.density[0]) rmax = std::max(rmax, v);
    for (int i = 0; i < 256; ++i) {
      const double rho = std::norm(psi[i]);
      CHECK(s.exchange[i] == 0.0);
      if (rho < 1e-6) continue;
      for (int c = 0; c < 2; ++c) {
        // Oracle: grad S / m from the analytic phase p z + 0.05 z^2.
        const double z = g.coord(0, i) - c0;
        CHECK(std::abs(s.velocity[c][2][i] - (p + 0.1 * z) / m) < 1e-9);
        CHECK(std::abs(s.velocity[c][2][i] - dbb[2][i]) < 1e-10);
        CHECK(s.velocity[c][0][i] == 0.0);
      }
    }
  }
}

TEST_CASE("spin split continuity identities on random fields", "[variations]") {
  Gen gen(43);
  for (int n = 0; n < 200; ++n) {
    const Grid g = n % 4 == 3 ? Grid::square(16, 10.0) : Grid::line(32, 10.0);
    PotentialSpec spec;
    switch (n % 3) {
      case 0: spec = uniform_b(Vec3(gen.normal(), gen.normal(), gen.normal())); break;
      case 1: spec.preset = "periodic_a"; spec.amplitude = gen.uniform(-1, 1); break;
      default: spec.preset = "gaussian_bump"; spec.height = gen.uniform(-1, 1); spec.width = 2.0; break;
    }
    const int band = g.dim == 2 ? 2 : 4;
    const auto f = make_field(g, {band_limited(g, band, gen), band_limited(g, band, gen)}, gen.uniform(0.5, 2.0),
                              gen.uniform(-2, 2), spec);
    REQUIRE(spin_split_continuity_residual(f) < 1e-10);
    const auto s = spin_split_guidance(f);
    for (std::size_t q = 0; q < g.cells(); ++q) {
      const auto r = split_rates(s, q);
      REQUIRE(r[0] * r[1] == 0.0);
    }
  }
}

TEST_CASE("real/imaginary split examples", "[variations]") {
  const Grid g = Grid::line(64, 20.0);
  const double m = 1.3, p = 2 * std::numbers::pi * 3 / 20.0;
  SECTION("plane wave") {
    Field psi(64);
    for (int i = 0; i < 64; ++i) psi[i] = std::exp(I * (p * g.coord(0, i)));
    const auto s = reim_split_guidance(make_scalar(g, psi, m, 1.0));
    for (int i = 0; i < 64; ++i) {
      const double z = g.coord(0, i);
      if (s.density[0][i] > 1e-6) CHECK(std::abs(s.velocity[0][2][i] - p / m) < 1e-12);
      if (s.density[1][i] > 1e-6) CHECK(std::abs(s.velocity[1][2][i] - p / m) < 1e-12);
      CHECK(std::abs(s.exchange[i] + p * p / (2 * m) * std::sin(2 * p * z)) < 1e-12);
    }
  }
  SECTION("real wave function sits on label 1 at rest") {
    Gen gen(44);
    Field psi(64);
    const RealField re = real_band_limited(g, 3, gen);
    for (int i = 0; i < 64; ++i) psi[i] = re[i];
    const auto s = reim_split_guidance(make_scalar(g, psi, m, 1.0));
    for (int i = 0; i < 64; ++i) {
      CHECK(s.density[1][i] == 0.0);
      CHECK(s.velocity[0][2][i] == 0.0);
    }
  }
}

TEST_CASE("real/imaginary split identities on random fields", "[variations]") {
  Gen gen(45);
  for (int n = 0; n < 200; ++n) {
    const Grid g = n % 4 == 3 ? Grid::square(16, 10.0) : Grid::line(32, 10.0);
    const int band = g.dim == 2 ? 2 : 4;
    auto f = make_scalar(g, band_limited(g, band, gen), gen.uniform(0.5, 2.0), gen.uniform(-2, 2));
    f.U = real_band_limited(g, band, gen);
    // A has a gradient part along the grid and a transverse part.
    f.A[2] = real_band_limited(g, band, gen);
    f.A[0] = real_band_limited(g, band, gen);
    if (g.dim == 2) f.A[1] = real_band_limited(g, band, gen);
    REQUIRE(reim_split_continuity_residual(f) < 1e-10);
    const auto s = reim_split_guidance(f);
    const auto v = dbb_velocity(f);
    for (std::size_t q = 0; q < g.cells(); ++q) {
      const double rho = std::norm(f.psi[q]);
      for (int a = 0; a < 3; ++a) REQUIRE(std::abs((s.current[0][a][q] + s.current[1][a][q]) / rho - v[a][q]) < 1e-12 * (1 + std::abs(v[a][q])));
      const auto r = split_rates(s, q);
      REQUIRE(r[0] * r[1] == 0.0);
    }
  }
}

TEST_CASE("gauge transformations change the split but not the Bohm velocity", "[variations]") {
  const Grid g = Grid::line(64, 20.0);
  Gen gen(46);
  const auto f = make_scalar(g, band_limited(g, 4, gen), 1.0, 1.5);
  SECTION("zero gauge function is the identity") {
    const auto h = gauge_transform(f, RealField(64, 0.0));
    for (int i = 0; i < 64; ++i) {
      CHECK(h.psi[i] == f.psi[i]);
      CHECK(h.A[2][i] == 0.0);
    }
  }
  SECTION("constant and periodic gauge functions") {
    for (const GaugeSpec& gs : {GaugeSpec{0.0, 0.7}, GaugeSpec{0.7, 0.3}}) {
      const auto h = gauge_transform(f, gauge_function(g, gs));
      const auto v0 = dbb_velocity(f), v1 = dbb_velocity(h);
      const auto s0 = reim_split_guidance(f), s1 = reim_split_guidance(h);
      double dv = 0.0, dsplit = 0.0;
      for (int i = 0; i < 64; ++i) {
        CHECK(std::abs(std::norm(h.psi[i]) - std::norm(f.psi[i])) < 1e-13);
        dv = std::max(dv, std::abs(v1[2][i] - v0[2][i]));
        dsplit = std::max(dsplit, std::abs(s1.velocity[0][2][i] - s0.velocity[0][2][i]));
      }
      CHECK(dv < 1e-12);
      CHECK(dsplit > 0.1);
    }
  }
}

TEST_CASE("quarter-turn rotation of a 2D Pauli field", "[variations]") {
  const Grid g = Grid::square(16, 8.0);
  Gen gen(47);
  const Spinor2Field phi{band_limited(g, 2, gen), band_limited(g, 2, gen)};
  const auto rot = rotate_quarter_x(g, phi);
  // Four quarter turns give the spin rotation by 2 pi, i.e. -1.
  auto back = rot;
  for (int k = 0; k < 3; ++k) back = rotate_quarter_x(g, back);
  for (std::size_t q = 0; q < g.cells(); ++q) {
    CHECK(std::abs(back[0][q] + phi[0][q]) < 1e-14);
    CHECK(std::abs(back[1][q] + phi[1][q]) < 1e-14);
  }
  // The spin density rotates with the field: s'_z(R x) = s_y(x).
  const int N = 16;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const std::size_t q = static_cast<std::size_t>(i) * N + j;
      const Vec3 s = bloch(Weyl(phi[0][q], phi[1][q]));
      const auto y = rotate_point_quarter_x({g.coord(0, i), g.coord(1, j)});
      const int ii = ((static_cast<int>(std::lround((y[0] + 4.0) / 0.5)) % N) + N) % N;
      const int jj = ((static_cast<int>(std::lround((y[1] + 4.0) / 0.5)) % N) + N) % N;
      const std::size_t qr = static_cast<std::size_t>(ii) * N + jj;
      const Vec3 sr = bloch(Weyl(rot[0][qr], rot[1][qr]));
      CHECK(std::abs(sr(2) - s(1)) < 1e-12);
      CHECK(std::abs(sr(1) + s(2)) < 1e-12);
      CHECK(std::abs(sr(0) - s(0)) < 1e-12);
    }
}

TEST_CASE("spin split model keeps the component densities equivariant", "[variations]") {
  const Grid g = Grid::line(256, 40.0);
  PauliGaussian pk;
  pk.width = 1.5;
  pk.momentum = Vec3(0, 0, 0.5);
  const auto rec = pauli_evolve(make_field(g, pauli_packets(g, {pk}), 1.0, 1.0, uniform_b(Vec3(1, 0, 0))), 3.0, 0.01);
  const auto tm = build_spin_split_model(rec);
  std::vector<RealField> p0;
  for (int c = 0; c < 2; ++c) p0.emplace_back(tm->density(0, c), tm->density(0, c) + g.cells());
  const int last = tm->frames() - 1;
  const auto out = integrate_master_mol(g, 2, tabulated_flow(*tm), tm->frame_stride(), 0, p0, {last});
  double err = 0.0, moved = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t q = 0; q < g.cells(); ++q) {
      err = std::max(err, std::abs(out[0][c][q] - tm->density(last, c)[q]));
      moved = std::max(moved, std::abs(tm->density(last, c)[q] - p0[c][q]));
    }
  CHECK(moved > 0.01);
  CHECK(err < 1e-6);

  EnsembleOptions o;
  o.n = 4000;
  o.seed = 3;
  o.checkpoints = {0.0, 3.0};
  const auto run = equivariance_test(*tm, o);
  const auto& st = run.report.checkpoints.back();
  CHECK(st.tv_total < 3 * st.tv_noise);
  CHECK(run.report.jump_mean > 0.5);
}

TEST_CASE("real/imaginary split model is equivariant", "[variations]") {
  const Grid g = Grid::line(256, 40.0);
  PotentialSpec bump;
  bump.preset = "gaussian_bump";
  bump.height = 0.3;
  bump.width = 1.0;
  PauliGaussian a, b;
  a.center = Vec3(0, 0, -4);
  a.momentum = Vec3(0, 0, 1.0);
  b.center = Vec3(0, 0, 4);
  b.momentum = Vec3(0, 0, -0.8);
  const auto rec = pauli_evolve(make_field(g, pauli_packets(g, {a, b}), 1.0, 1.0, bump), 3.0, 0.01);
  for (const GaugeSpec& gs : {GaugeSpec{}, GaugeSpec{0.7, 0.3}}) {
    const auto tm = build_reim_split_model(rec, gs);
    EnsembleOptions o;
    o.n = 4000;
    o.seed = 5;
    o.checkpoints = {0.0, 3.0};
    const auto run = equivariance_test(*tm, o);
    const auto& st = run.report.checkpoints.back();
    CHECK(st.tv_total < 3 * st.tv_noise);
    CHECK(run.report.jump_mean > 0.5);
  }
}
