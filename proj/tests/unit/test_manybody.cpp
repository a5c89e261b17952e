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
#include "support/generators.hpp"
#include "zigzag/manybody.hpp"

using namespace zigzag;
using zigzag::testing::Gen;

namespace {

Block2P spin_block(int sector, cplx uu, cplx ud, cplx du, cplx dd) {
  Block2P b{};
  b[4 * sector + 0] = uu;
  b[4 * sector + 1] = ud;
  b[4 * sector + 2] = du;
  b[4 * sector + 3] = dd;
  return b;
}

double sample_max_diff(const WaveRecord& rec, int fr, const SectorField2P& ref) {
  double err = 0.0;
  for (int comp = 0; comp < kComponents2P; ++comp)
    for (std::size_t q = 0; q < rec.grid.cells(); ++q)
      err = std::max(err, std::abs(rec.component(fr, comp)[q] - ref.phi[comp][q]));
  return err;
}

}  // namespace

TEST_CASE("sector bookkeeping", "[manybody]") {
  CHECK(sector_name(sector_of(0, 0)) == "RR");
  CHECK(sector_name(sector_of(0, 1)) == "RL");
  CHECK(sector_name(sector_of(1, 0)) == "LR");
  CHECK(sector_name(sector_of(1, 1)) == "LL");
  CHECK(flip_sector(sector_of(0, 1), 0) == sector_of(1, 1));
  CHECK(flip_sector(sector_of(0, 1), 1) == sector_of(0, 0));
}

TEST_CASE("two-particle velocities on spin eigenstates", "[manybody]") {
  const double r = 1.0 / std::sqrt(2.0);
  const int RR = sector_of(0, 0);
  const auto singlet = velocities_2p(spin_block(RR, 0, r, -r, 0), RR);
  CHECK(std::abs(singlet.v1) < 1e-15);
  CHECK(std::abs(singlet.v2) < 1e-15);
  const auto upup = velocities_2p(spin_block(RR, 1, 0, 0, 0), RR);
  CHECK(upup.v1 == 1.0);
  CHECK(upup.v2 == 1.0);
  const auto updown = velocities_2p(spin_block(RR, 0, 1, 0, 0), RR);
  CHECK(updown.v1 == 1.0);
  CHECK(updown.v2 == -1.0);
  const int LR = sector_of(1, 0);
  const auto l = velocities_2p(spin_block(LR, 1, 0, 0, 0), LR);
  CHECK(l.v1 == -1.0);
  CHECK(l.v2 == 1.0);
  CHECK(velocities_2p(Block2P{}, RR).degenerate);
}

TEST_CASE("two-particle guidance properties on random blocks", "[manybody]") {
  Gen gen(21);
  for (int n = 0; n < 100000; ++n) {
    Block2P b;
    const double scale = std::pow(10.0, gen.uniform(-3, 3));
    for (auto& v : b) v = scale * gen.complex_normal();
    const double m = gen.uniform(0.0, 3.0);
    for (int c = 0; c < kSectors; ++c) {
      const auto v = velocities_2p(b, c);
      CHECK(std::abs(v.v1) <= 1.0 + 1e-12);
      CHECK(std::abs(v.v2) <= 1.0 + 1e-12);
      for (int i = 0; i < 2; ++i) {
        const double fwd = rates_2p(b, c, i, m), back = rates_2p(b, flip_sector(c, i), i, m);
        CHECK(fwd >= 0.0);
        CHECK(fwd * back == 0.0);
      }
    }
    for (int c = 0; c < kSectors; ++c) CHECK(rates_2p(b, c, 0, 0.0) == 0.0);
  }
}

TEST_CASE("product-state rates factorize", "[manybody]") {
  Gen gen(22);
  for (int n = 0; n < 10000; ++n) {
    const Weyl r1(gen.complex_normal(), 0), l1(gen.complex_normal(), 0);
    const Weyl r2(gen.complex_normal(), 0), l2(gen.complex_normal(), 0);
    const double m = gen.uniform(0.1, 2.0);
    const cplx u[2] = {r1(0), l1(0)}, w[2] = {r2(0), l2(0)};
    Block2P b{};
    for (int c = 0; c < kSectors; ++c) b[4 * c] = u[sector_chirality(c, 0)] * w[sector_chirality(c, 1)];
    const auto one = jump_rates(r1, l1, m), two = jump_rates(r2, l2, m);
    const int RR = sector_of(0, 0), LL = sector_of(1, 1);
    CHECK(rates_2p(b, RR, 0, m) == Catch::Approx(one.t_RL).margin(1e-12));
    CHECK(rates_2p(b, RR, 1, m) == Catch::Approx(two.t_RL).margin(1e-12));
    CHECK(rates_2p(b, LL, 0, m) == Catch::Approx(one.t_LR).margin(1e-12));
    CHECK(rates_2p(b, LL, 1, m) == Catch::Approx(two.t_LR).margin(1e-12));
  }
}

TEST_CASE("flipping one chirality moves the partner when spins are entangled", "[manybody]") {
  const Grid line = Grid::line(32, 10.0);
  EntangledSpec spec;
  const SectorField2P f = entangled_packets(line, spec);
  Block2P b;
  for (int comp = 0; comp < kComponents2P; ++comp) b[comp] = f.phi[comp][16 * 32 + 16];
  const int RR = sector_of(0, 0), LR = sector_of(1, 0);
  const auto before = velocities_2p(b, RR), after = velocities_2p(b, LR);
  // Oracle: v2 = cos(2 theta) in each sector.
  CHECK(before.v2 == Catch::Approx(std::cos(2 * spec.theta[RR])));
  CHECK(after.v2 == Catch::Approx(std::cos(2 * spec.theta[LR])));
  CHECK(std::abs(before.v2 - after.v2) > 0.5);
  // Without entanglement (theta = 0) the partner keeps its velocity.
  spec.theta = {0, 0, 0, 0};
  const SectorField2P g = entangled_packets(line, spec);
  for (int comp = 0; comp < kComponents2P; ++comp) b[comp] = g.phi[comp][16 * 32 + 16];
  CHECK(velocities_2p(b, RR).v2 == velocities_2p(b, LR).v2);
}

TEST_CASE("product states evolve as independent particles", "[manybody]") {
  const Grid line = Grid::line(32, 16.0);
  const cplx a = 1.0 / std::sqrt(2.0);
  const auto p1 = chiral_packets(line, {{-2.0, 1.2, 0.6, 1.0, 0.4}});
  const auto p2 = chiral_packets(line, {{2.5, 1.0, -0.4, a, a}});
  const double m = 0.9, T = 2.0, dt = 0.1;
  const auto r1 = evolve_1d(p1, m, T, dt), r2 = evolve_1d(p2, m, T, dt);
  const auto rec = evolve_2p(product_state(particle_from_chiral(p1), particle_from_chiral(p2)), m, T, dt);
  double err = 0.0;
  for (int fr = 0; fr < rec.frames; fr += 5) {
    ChiralField1D f1{line, Field(r1.component(fr, 0), r1.component(fr, 0) + 32),
                     Field(r1.component(fr, 1), r1.component(fr, 1) + 32)};
    ChiralField1D f2{line, Field(r2.component(fr, 0), r2.component(fr, 0) + 32),
                     Field(r2.component(fr, 1), r2.component(fr, 1) + 32)};
    err = std::max(err, sample_max_diff(rec, fr, product_state(particle_from_chiral(f1), particle_from_chiral(f2))));
    CHECK(std::abs(record_norm(rec, fr) - 1.0) < 1e-10);
  }
  CHECK(err < 1e-8);
}

TEST_CASE("rest superposition sector populations are products", "[manybody]") {
  const Grid line = Grid::line(16, 8.0);
  const cplx a = 1.0 / std::sqrt(2.0);
  const auto one = particle_from_chiral(chiral_rest_superposition(line, a, a));
  const double m = 1.0;
  const auto rec = evolve_2p(product_state(one, one), m, 2.0, 0.05);
  for (int fr = 0; fr < rec.frames; fr += 7) {
    const double t = rec.time(fr);
    const double c2 = std::pow(std::cos(m * t), 2), s2 = std::pow(std::sin(m * t), 2);
    const auto p = sector_populations(rec, fr);
    CHECK(std::abs(p[sector_of(0, 0)] - c2 * c2) < 1e-12);
    CHECK(std::abs(p[sector_of(0, 1)] - c2 * s2) < 1e-12);
    CHECK(std::abs(p[sector_of(1, 0)] - s2 * c2) < 1e-12);
    CHECK(std::abs(p[sector_of(1, 1)] - s2 * s2) < 1e-12);
  }
}

TEST_CASE("massless sectors advect along diagonals", "[manybody]") {
  const Grid line = Grid::line(64, 20.0);
  EntangledSpec spec;
  spec.center1 = 0.0;
  spec.center2 = 0.0;
  const auto init = entangled_packets(line, spec);
  const double T = 2.5;
  const auto rec = evolve_2p(init, 0.0, T, 0.3125);
  const int fr = rec.frames - 1;
  const int N = 64;
  const int shift = static_cast<int>(std::lround(rec.time(fr) / line.spacing(0)));
  REQUIRE(std::abs(shift * line.spacing(0) - rec.time(fr)) < 1e-12);
  double err = 0.0;
  for (int comp = 0; comp < kComponents2P; ++comp) {
    const int c = comp / 4, s = comp % 4;
    // Direction of particle i: s(c_i) times the spin sign.
    const int d1 = (sector_chirality(c, 0) == 0 ? 1 : -1) * ((s >> 1) == 0 ? 1 : -1);
    const int d2 = (sector_chirality(c, 1) == 0 ? 1 : -1) * ((s & 1) == 0 ? 1 : -1);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const int i0 = ((i - d1 * shift) % N + N) % N, j0 = ((j - d2 * shift) % N + N) % N;
        err = std::max(err, std::abs(rec.component(fr, comp)[i * N + j] - init.phi[comp][i0 * N + j0]));
      }
  }
  CHECK(err < 1e-12);
}

TEST_CASE("antisymmetry survives evolution", "[manybody]") {
  const Grid line = Grid::line(32, 16.0);
  EntangledSpec spec;
  spec.momentum1 = 0.5;
  const auto init = antisymmetrize(entangled_packets(line, spec));
  const SectorField2P e = exchange(init);
  double sym = 0.0;
  for (int comp = 0; comp < kComponents2P; ++comp)
    for (std::size_t q = 0; q < init.phi[comp].size(); ++q)
      sym = std::max(sym, std::abs(init.phi[comp][q] + e.phi[comp][q]));
  REQUIRE(sym < 1e-15);
  const auto rec = evolve_2p(init, 1.0, 3.0, 0.1);
  CHECK(antisymmetry_residual(rec) < 1e-10);
}

TEST_CASE("sector balance and subluminality", "[manybody]") {
  const Grid line = Grid::line(32, 16.0);
  EntangledSpec spec;
  const auto rec = evolve_2p(entangled_packets(line, spec), 1.0, 0.05, 5e-4);
  CHECK(sector_balance_residual(rec) < 1e-6);
  for (int fr = 0; fr < rec.frames; fr += 25) CHECK(max_speed_2p(rec, fr) <= 1.0 + 1e-12);
}

TEST_CASE("two-particle trajectories are reproducible", "[manybody]") {
  const Grid line = Grid::line(32, 16.0);
  auto rec = std::make_shared<WaveRecord>(evolve_2p(entangled_packets(line, EntangledSpec{}), 1.0, 1.0, 0.05));
  const TwoParticleModel model(rec);
  PdmpOptions opt;
  const ParticleState s0{{-1.5, 1.5, 0}, sector_of(0, 0), 0.0};
  const auto a = sample_trajectory(model, s0, 1.0, 3, 0, opt);
  const auto b = sample_trajectory(model, s0, 1.0, 3, 0, opt);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].x == b.samples[i].x);
    CHECK(std::abs(a.samples[i].v[0]) <= 1.0 + 1e-12);
  }
  for (const auto& ev : a.events) CHECK(((ev.from ^ ev.to) == 1 || (ev.from ^ ev.to) == 2));
}
