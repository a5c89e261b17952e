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
#include "zigzag/error.hpp"
#include "zigzag/nonrel.hpp"

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

Spinor2Field plane_wave(const Grid& g, double p, const Weyl& xi) {
  Spinor2Field phi{Field(g.cells()), Field(g.cells())};
  for (int i = 0; i < g.points[0]; ++i) {
    const cplx w = std::exp(I * (p * g.coord(0, i)));
    phi[0][i] = w * xi(0);
    phi[1][i] = w * xi(1);
  }
  return phi;
}

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("free Pauli plane wave picks up the kinetic phase", "[pauli]") {
  const Grid g = Grid::line(64, 20.0);
  const double p = 2 * std::numbers::pi * 3 / 20.0, m = 1.7;
  const auto f = make_field(g, plane_wave(g, p, Weyl(0.6, cplx(0, 0.8))), m, 1.0);
  const auto rec = pauli_evolve(f, 5.0, 0.5);
  for (int fr = 0; fr < rec.frames; ++fr) {
    const cplx ph = std::exp(-I * (p * p * rec.time(fr) / (2 * m)));
    CHECK(std::abs(rec.component(fr, 0)[7] - ph * f.phi[0][7]) < 1e-12);
    CHECK(std::abs(rec.component(fr, 1)[7] - ph * f.phi[1][7]) < 1e-12);
  }
}

TEST_CASE("uniform field gives Larmor precession", "[pauli]") {
  const Grid g = Grid::line(16, 10.0);
  PotentialSpec spec;
  spec.preset = "uniform_b";
  spec.b = Vec3(0, 0, 0.8);
  const double m = 1.3, e = 0.9;
  Spinor2Field phi{Field(16, 1.0 / std::sqrt(20.0)), Field(16, 1.0 / std::sqrt(20.0))};
  const auto rec = pauli_evolve(make_field(g, phi, m, e, spec), 4.0, 0.01);
  for (int fr = 0; fr < rec.frames; fr += 37) {
    const double t = rec.time(fr);
    const Weyl w(rec.component(fr, 0)[3], rec.component(fr, 1)[3]);
    const Vec3 s = bloch(w) / w.squaredNorm();
    // Oracle: precession about z at angular frequency eB/m.
    const double ang = e * 0.8 / m * t;
    CHECK(std::abs(s(0) - std::cos(ang)) < 1e-12);
    CHECK(std::abs(std::abs(s(1)) - std::abs(std::sin(ang))) < 1e-12);
  }
}

TEST_CASE("free Pauli Gaussian spreads by the textbook law", "[pauli]") {
  const Grid g = Grid::line(512, 40.0);
  const double m = 1.0, w = 1.0, p = 0.5;
  PauliGaussian pk;
  pk.width = w;
  pk.momentum = Vec3(0, 0, p);
  pk.spin = Weyl(1.0, 1.0);
  const auto f = make_field(g, pauli_packets(g, {pk}), m, 1.0);
  const auto rec = pauli_evolve(f, 3.0, 0.1);
  for (int fr = 0; fr < rec.frames; fr += 10) {
    const double t = rec.time(fr);
    double s0 = 0, s1 = 0, s2 = 0;
    for (int i = 0; i < 512; ++i) {
      const double z = g.coord(0, i);
      const double d = std::norm(rec.component(fr, 0)[i]) + std::norm(rec.component(fr, 1)[i]);
      s0 += d;
      s1 += d * z;
      s2 += d * z * z;
    }
    const double mean = s1 / s0, var = s2 / s0 - mean * mean;
    CHECK(std::abs(s0 * g.cell_volume() - 1.0) < 1e-10);
    CHECK(std::abs(mean - p * t / m) < 1e-6);
    CHECK(std::abs(var - (w * w + t * t / (4 * m * m * w * w))) < 1e-6);
  }
}

TEST_CASE("Pauli evolution conserves the norm with potentials", "[pauli]") {
  for (const char* preset : {"gaussian_bump", "periodic_a", "linear_v"}) {
    const Grid g = Grid::line(256, 30.0);
    PotentialSpec spec;
    spec.preset = preset;
    spec.height = 0.5;
    spec.width = 1.5;
    spec.amplitude = 0.7;
    spec.field = 0.05;
    PauliGaussian pk;
    pk.momentum = Vec3(0, 0, 0.8);
    const auto rec = pauli_evolve(make_field(g, pauli_packets(g, {pk}), 1.0, 1.0, spec), 5.0, 0.01);
    CHECK(std::abs(record_norm(rec, rec.frames - 1) - 1.0) < 1e-10 * 5.0);
  }
  PotentialSpec bad;
  bad.preset = "gaussian_bump";
  bad.height = 500.0;
  CHECK_THROWS(pauli_evolve(make_field(Grid::line(64, 10.0), pauli_packets(Grid::line(64, 10.0), {PauliGaussian{}}),
                                       1.0, 1.0, bad),
                            1.0, 0.01));
}

TEST_CASE("current expansion examples", "[nonrel]") {
  const Grid g = Grid::line(64, 20.0);
  const double m = 2.0;
  SECTION("constant spinor") {
    Spinor2Field phi{Field(64, cplx(0.3, 0.1)), Field(64, cplx(-0.2, 0.4))};
    const auto ex = expand_currents(make_field(g, phi, m, 1.0));
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 3; ++a) CHECK(max_abs(ex.j[c][1][a]) < 1e-15);
    CHECK(max_abs(ex.F[1]) < 1e-15);
    CHECK(max_abs(ex.F[3]) < 1e-15);
    CHECK(max_abs(ex.F[0]) == 0.0);
    CHECK(max_abs(ex.F[2]) == 0.0);
  }
  SECTION("plane wave along z with spin up") {
    const double p = 2 * std::numbers::pi * 2 / 20.0;
    const auto ex = expand_currents(make_field(g, plane_wave(g, p, Weyl(1, 0)), m, 1.0));
    for (int i = 0; i < 64; ++i) {
      CHECK(std::abs(ex.j0[0][1][i] - p / (2 * m)) < 1e-13);
      CHECK(std::abs(ex.j0[1][1][i] + p / (2 * m)) < 1e-13);
    }
  }
  SECTION("spin-z Gaussian has F1 = (1/2) d_z density") {
    const Grid fine = Grid::line(256, 30.0);
    PauliGaussian pk;
    pk.width = 1.3;
    const auto f = make_field(fine, pauli_packets(fine, {pk}), m, 1.0);
    const auto ex = expand_currents(f);
    double err = 0.0;
    for (int i = 0; i < 256; ++i) {
      const double z = fine.coord(0, i);
      // Oracle: derivative of the Gaussian density by hand.
      const double drho = -z / (pk.width * pk.width) * ex.density[i];
      err = std::max(err, std::abs(ex.F[1][i] - 0.5 * drho));
    }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("algebraic expansion identities on random band-limited fields", "[nonrel]") {
  Gen gen(31);
  const char* presets[] = {"none", "periodic_a", "gaussian_bump"};
  for (int n = 0; n < 1000; ++n) {
    const bool two_d = n % 10 == 9;
    const Grid g = two_d ? Grid::square(16, 12.0) : Grid::line(32, 12.0);
    PotentialSpec spec;
    spec.preset = presets[n % 3];
    spec.amplitude = gen.uniform(-1, 1);
    spec.height = gen.uniform(-1, 1);
    spec.width = 2.0;
    const int band = two_d ? 2 : 4;
    const auto f = make_field(g, {band_limited(g, band, gen), band_limited(g, band, gen)}, gen.uniform(0.5, 3.0),
                              gen.uniform(-2, 2), spec);
    const auto r = identity_residuals(f);
    REQUIRE(r.max[0] < 1e-10);
    REQUIRE(r.max[3] < 1e-10);
    REQUIRE(r.max[4] < 1e-10);
    REQUIRE(r.max[5] < 1e-10);
    const auto ex = expand_currents(f);
    for (std::size_t q = 0; q < g.cells(); ++q) REQUIRE(std::abs(ex.F[1][q] - ex.F1_divergence[q]) < 1e-10);
  }
}

TEST_CASE("dynamical identities with the Pauli right-hand side", "[nonrel]") {
  Gen gen(32);
  for (const char* preset : {"none", "periodic_a"}) {
    const Grid g = Grid::line(32, 12.0);
    PotentialSpec spec;
    spec.preset = preset;
    spec.amplitude = 0.6;
    const auto f = make_field(g, {band_limited(g, 3, gen), band_limited(g, 3, gen)}, 1.4, 0.8, spec);
    const auto r = identity_residuals(f);
    CHECK(r.max[1] < 1e-10);
    CHECK(r.max[2] < 1e-10);
  }
  SECTION("evolving packet over a potential bump") {
    for (int N : {128, 256}) {
      const Grid g = Grid::line(N, 30.0);
      PotentialSpec spec;
      spec.preset = "gaussian_bump";
      spec.height = 0.4;
      spec.width = 1.5;
      PauliGaussian pk;
      pk.width = 0.7;
      pk.momentum = Vec3(0, 0, 1.0);
      pk.spin = Weyl(1.0, cplx(0.3, 0.5));
      auto f = make_field(g, pauli_packets(g, {pk}), 1.0, 1.0, spec);
      const auto rec = pauli_evolve(f, 1.0, 0.01);
      const auto r = identity_residuals(pauli_frame(rec, f.pot, rec.frames - 1));
      const double worst = std::max(r.max[1], r.max[2]);
      INFO("N = " << N);
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("zig-zag Pauli model examples", "[nonrel]") {
  const Grid g = Grid::line(64, 20.0);
  const double m = 2.0;
  SECTION("model B: spin x, momentum z") {
    const double p = 2 * std::numbers::pi * 2 / 20.0;
    const auto ex = expand_currents(make_field(g, plane_wave(g, p, Weyl(1, 1).normalized()), m, 1.0));
    const auto gb = nr_guidance(ex, NRModel::kPauliB);
    const auto v = nr_velocity(gb, 0);
    CHECK(std::abs(v[0][5] - 1.0) < 1e-12);
    CHECK(std::abs(v[2][5] - p / m) < 1e-12);
    CHECK(max_abs(nr_rate(gb, 0)) < 1e-12);  // div of the spin density vanishes
    // Order-1 truncation equals model B when v_P is orthogonal to s.
    const auto v1 = nr_velocity(nr_guidance(ex, NRModel::kTruncated1), 0);
    for (int a = 0; a < 3; ++a) CHECK(std::abs(v1[a][5] - v[a][5]) < 1e-12);
  }
  SECTION("model A: constant spin-z state") {
    Spinor2Field phi{Field(64, 0.2), Field(64, 0.0)};
    const auto ga = nr_guidance(expand_currents(make_field(g, phi, m, 1.0)), NRModel::kPauliA);
    CHECK(std::abs(nr_velocity(ga, 0)[2][9] - 1.0) < 1e-14);
    CHECK(std::abs(nr_velocity(ga, 1)[2][9] + 1.0) < 1e-14);
    CHECK(max_abs(nr_rate(ga, 0)) == 0.0);
  }
  SECTION("model B rate on a spin-z Gaussian") {
    const Grid fine = Grid::line(256, 30.0);
    PauliGaussian pk;
    pk.width = 1.2;
    const auto ex = expand_currents(make_field(fine, pauli_packets(fine, {pk}), m, 1.0));
    const auto gb = nr_guidance(ex, NRModel::kPauliB);
    const auto tR = nr_rate(gb, 0), tL = nr_rate(gb, 1);
    for (int i = 64; i < 192; ++i) {
      const double z = fine.coord(0, i);
      CHECK(std::abs(tR[i] - std::max(0.0, z / (1.2 * 1.2))) < 1e-9);
      CHECK(std::abs(tL[i] - std::max(0.0, -z / (1.2 * 1.2))) < 1e-9);
    }
  }
  SECTION("v_A equals minus the spin component of v_P") {
    Gen gen(33);
    const auto f = make_field(g, {band_limited(g, 3, gen), band_limited(g, 3, gen)}, m, 1.0);
    const auto ex = expand_currents(f);
    const auto vb = nr_velocity(nr_guidance(ex, NRModel::kPauliB), 0);
    const auto v1 = nr_velocity(nr_guidance(ex, NRModel::kTruncated1), 0);
    for (int i = 0; i < 64; ++i) {
      Vec3 s, vp;
      for (int a = 0; a < 3; ++a) {
        s(a) = ex.spin[a][i] / ex.density[i];
        vp(a) = ex.pauli_current[a][i] / ex.density[i];
      }
      for (int a = 0; a < 3; ++a) CHECK(std::abs(v1[a][i] - vb[a][i] + vp.dot(s) * s(a)) < 1e-10);
    }
  }
  SECTION("model A positivity guard names the region") {
    PauliGaussian pk;
    pk.width = 0.3;
    pk.momentum = Vec3(0, 0, 6.0);
    const auto f = make_field(g, pauli_packets(g, {pk}), 0.5, 1.0);
    const auto ex = expand_currents(f);
    try {
      check_positive_density(nr_guidance(ex, NRModel::kPauliA), ex);
      FAIL("expected a positivity error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kNumerical);
      CHECK(std::string(e.what()).find("z in [") != std::string::npos);
    }
  }
}

TEST_CASE("spin-eigenstate closed forms match the general models", "[nonrel]") {
  const Grid g = Grid::line(512, 60.0);
  Gen gen(34);
  for (int trial = 0; trial < 20; ++trial) {
    const double m = gen.uniform(0.5, 4.0);
    Weyl xi(gen.complex_normal(), gen.complex_normal());
    xi.normalize();
    Field psi(512);
    const double c0 = gen.uniform(-3, 3), w = gen.uniform(1.0, 2.0), p = gen.uniform(-1, 1);
    for (int i = 0; i < 512; ++i) {
      const double z = g.coord(0, i) - c0;
      psi[i] = std::exp(-z * z / (4 * w * w)) * std::exp(I * (p * z + 0.1 * z * z));
    }
    Spinor2Field phi{Field(512), Field(512)};
    for (int i = 0; i < 512; ++i) {
      phi[0][i] = psi[i] * xi(0);
      phi[1][i] = psi[i] * xi(1);
    }
    const auto ex = expand_currents(make_field(g, phi, m, 1.0));
    const auto forms = spin_eigenstate_forms(g, psi, xi, m);
    const auto gb = nr_guidance(ex, NRModel::kPauliB), g1 = nr_guidance(ex, NRModel::kTruncated1);
    double dmax = 0.0;
    for (double d : ex.density) dmax = std::max(dmax, d);
    for (int c = 0; c < 2; ++c) {
      const auto vb = nr_velocity(gb, c), v1 = nr_velocity(g1, c);
      const auto tb = nr_rate(gb, c), t1 = nr_rate(g1, c);
      for (int i = 0; i < 512; ++i) {
        if (ex.density[i] < 1e-6 * dmax) continue;
        for (int a = 0; a < 3; ++a) {
          CHECK(std::abs(vb[a][i] - forms.v_pauli[c][a][i]) < 1e-9);
          CHECK(std::abs(v1[a][i] - forms.v_dirac[c][a][i]) < 1e-9);
        }
        CHECK(std::abs(tb[i] - forms.t_pauli[c][i]) < 1e-10 * (1 + tb[i]));
        // The truncated closed form can turn negative once |grad S| / m exceeds 1; rates are clamped at zero.
        CHECK(std::abs(t1[i] - std::max(0.0, forms.t_dirac[c][i])) < 1e-10 * (1 + t1[i]));
      }
    }
  }
}

TEST_CASE("order-1 truncation error scales as (p/m)^2", "[nonrel]") {
  const Grid g = Grid::line(512, 40.0);
  PauliGaussian pk;
  pk.momentum = Vec3(0, 0, 1.0);
  pk.spin = Weyl(std::cos(0.4), std::sin(0.4));
  const Spinor2Field phi = pauli_packets(g, {pk});
  double prev = 0.0;
  for (double m : {4.0, 8.0, 16.0, 32.0}) {
    const double dev = truncation_deviation(make_field(g, phi, m, 1.0));
    if (prev > 0) {
      CHECK(prev / dev > 3.0);
      CHECK(prev / dev < 5.0);
    }
    prev = dev;
  }
}

TEST_CASE("Pauli zig-zag models keep their densities equivariant", "[nonrel]") {
  const Grid g = Grid::line(256, 40.0);
  PauliGaussian pk;
  pk.momentum = Vec3(0, 0, 1.0);
  pk.spin = Weyl(std::cos(0.4), std::sin(0.4));
  auto f = make_field(g, pauli_packets(g, {pk}), 4.0, 1.0);
  const auto rec = pauli_evolve(f, 2.0, 0.01);
  for (NRModel mdl : {NRModel::kPauliA, NRModel::kPauliB}) {
    const auto tm = build_nr_model(rec, mdl);
    const std::size_t n = g.cells();
    std::vector<RealField> p0;
    for (int c = 0; c < 2; ++c) p0.emplace_back(tm->density(0, c), tm->density(0, c) + n);
    const int last = tm->frames() - 1;
    const auto out = integrate_master_mol(g, 2, tabulated_flow(*tm), tm->frame_stride(), 0, p0, {last});
    double err = 0.0;
    for (int c = 0; c < 2; ++c)
      for (std::size_t q = 0; q < n; ++q) err = std::max(err, std::abs(out[0][c][q] - tm->density(last, c)[q]));
    CHECK(err < 1e-6);
  }
}

TEST_CASE("truncated model density drift shrinks with p/m", "[nonrel]") {
  const Grid g = Grid::line(256, 40.0);
  PauliGaussian pk;
  pk.momentum = Vec3(0, 0, 1.0);
  pk.spin = Weyl(std::cos(0.4), std::sin(0.4));
  double prev = 0.0;
  for (double m : {4.0, 8.0, 16.0, 32.0}) {
    const auto rec = pauli_evolve(make_field(g, pauli_packets(g, {pk}), m, 1.0), 2.0, 0.01);
    const auto tm = build_nr_model(rec, NRModel::kTruncated1);
    const double drift = nr_density_drift(*tm, rec, 1);
    INFO("m = " << m << ", drift = " << drift);
    CHECK(drift > 0.0);
    if (prev > 0) CHECK(prev / drift >= 3.0);
    prev = drift;
  }
}

TEST_CASE("slow packets zig-zag along plus and minus the spin", "[nonrel]") {
  const Grid g = Grid::line(256, 40.0);
  PauliGaussian pk;
  pk.momentum = Vec3(0, 0, 0.2);
  const double tilt = 0.5;
  pk.spin = Weyl(std::cos(tilt / 2), std::sin(tilt / 2));  // s_z = cos(tilt)
  const double m = 10.0;
  const auto rec = pauli_evolve(make_field(g, pauli_packets(g, {pk}), m, 1.0), 2.0, 0.01);
  const auto tm = build_nr_model(rec, NRModel::kPauliB);
  EnsembleOptions o;
  o.n = 400;
  o.seed = 9;
  o.keep = 400;
  o.checkpoints = {2.0};
  const auto run = equivariance_test(*tm, o);
  double sum[2] = {0, 0};
  long count[2] = {0, 0};
  for (const auto& tr : run.kept)
    for (const auto& s : tr.samples) {
      sum[s.label] += s.v[0];
      count[s.label] += 1;
    }
  REQUIRE(count[0] > 1000);
  REQUIRE(count[1] > 1000);
  const double vp = 0.2 / m;
  CHECK(std::abs(sum[0] / count[0] - (std::cos(tilt) + vp)) < 0.05);
  CHECK(std::abs(sum[1] / count[1] - (-std::cos(tilt) + vp)) < 0.05);
}
