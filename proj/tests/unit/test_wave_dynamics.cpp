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
#include <filesystem>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "zigzag/wave_dynamics.hpp"

using namespace zigzag;

namespace {

const cplx I(0.0, 1.0);

double gaussian(double z, double c, double w, const Grid& g) {
  const double d = g.wrap(0, z - c);
  return std::exp(-d * d / (4 * w * w));
}

}  // namespace

TEST_CASE("massless 1D evolution is rigid transport", "[wave]") {
  const Grid g = Grid::line(256, 40.0);
  ChiralField1D init = chiral_packets(g, {{-3.0, 1.0, 0.0, 1.0, 0.0}});
  const double T = 7.3;
  const auto rec = evolve_1d(init, 0.0, T, 0.05);
  const double s = std::abs(init.f[128]) / gaussian(g.coord(0, 128), -3.0, 1.0, g);
  double err = 0.0, gmax = 0.0;
  const int k = rec.frames - 1;
  for (int i = 0; i < 256; ++i) {
    const double expect = s * gaussian(g.coord(0, i) - rec.time(k), -3.0, 1.0, g);
    err = std::max(err, std::abs(rec.component(k, 0)[i] - expect));
    gmax = std::max(gmax, std::abs(rec.component(k, 1)[i]));
  }
  CHECK(err < 1e-10);
  CHECK(gmax < 1e-13);
}

TEST_CASE("positive-energy mode only picks up a phase", "[wave]") {
  const Grid g = Grid::line(64, 20.0);
  const double m = 1.3;
  const int mode = 3;
  const double k = 2 * std::numbers::pi * mode / g.extent[0];
  // Oracle: numerical diagonalization of the mode matrix.
  Eigen::Matrix2d H;
  H << k, m, m, -k;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
  const double E = es.eigenvalues()(1);
  const Eigen::Vector2d v = es.eigenvectors().col(1);
  ChiralField1D init{g, Field(64), Field(64)};
  for (int i = 0; i < 64; ++i) {
    const cplx w = std::exp(I * (k * g.coord(0, i)));
    init.f[i] = v(0) * w;
    init.g[i] = v(1) * w;
  }
  const auto coarse = evolve_1d(init, m, 0.31 * 4, 0.31);
  double err = 0.0;
  for (int fr = 0; fr < coarse.frames; ++fr) {
    const cplx ph = std::exp(-I * (E * coarse.time(fr)));
    for (int i = 0; i < 64; ++i) {
      err = std::max(err, std::abs(coarse.component(fr, 0)[i] - ph * init.f[i]));
      err = std::max(err, std::abs(coarse.component(fr, 1)[i] - ph * init.g[i]));
    }
  }
  CHECK(err < 1e-12);
}

TEST_CASE("dt above the grid spacing is rejected", "[wave]") {
  const Grid g = Grid::line(64, 20.0);
  ChiralField1D init = chiral_packets(g, {{0.0, 1.0, 0.0, 1.0, 0.0}});
  CHECK_THROWS(evolve_1d(init, 1.0, 2.0, 1.0));
  CHECK_THROWS(evolve_1d(init, 1.0, 2.0, 0.0));
  init.f[3] = cplx(std::nan(""), 0.0);
  CHECK_THROWS(evolve_1d(init, 1.0, 1.0, 0.1));
  CHECK_THROWS(evolve_1d(chiral_packets(Grid::line(8, 20.0), {{0.0, 1.0, 0.0, 1.0, 0.0}}), 1.0, 1.0, 0.1));
}

TEST_CASE("spatially constant rest superposition", "[wave]") {
  const Grid g = Grid::line(16, 8.0);
  const cplx a = 1.0 / std::sqrt(2.0), b = a;
  const double m = 1.0;
  const auto rec = evolve_1d(chiral_rest_superposition(g, a, b), m, 3.0, 0.25);
  double err = 0.0;
  for (int fr = 0; fr < rec.frames; ++fr) {
    const double t = rec.time(fr);
    const auto p = chiral_decompose(rest_superposition_fixture(a, b, Weyl(1, 0), m, t));
    for (int i = 0; i < 16; ++i) {
      err = std::max(err, std::abs(std::sqrt(8.0) * rec.component(fr, 0)[i] - p.right(0)));
      err = std::max(err, std::abs(std::sqrt(8.0) * rec.component(fr, 1)[i] - p.left(0)));
      err = std::max(err, std::abs(8.0 * std::norm(rec.component(fr, 0)[i]) - std::pow(std::cos(m * t), 2)));
    }
  }
  CHECK(err < 1e-12);
}

TEST_CASE("rest superposition fixture closed forms", "[wave]") {
  const double m = 1.7;
  const cplx a = 1.0 / std::sqrt(2.0);
  for (double t : {0.0, 0.3, 1.1, 2.9}) {
    const auto p = chiral_decompose(rest_superposition_fixture(a, a, Weyl(1, 0), m, t));
    const auto c = chiral_currents(p.right, p.left);
    CHECK(std::abs(c.rho_R - std::pow(std::cos(m * t), 2)) < 1e-12);
    CHECK(std::abs(c.rho_L - std::pow(std::sin(m * t), 2)) < 1e-12);
    CHECK(std::abs(coupling_F(p.right, p.left, m) + m * std::sin(2 * m * t)) < 1e-12);
  }
  // a = 1, b = 0: no coupling, equal chiral weights.
  for (double t : {0.0, 0.7, 5.0}) {
    const auto p = chiral_decompose(rest_superposition_fixture(1.0, 0.0, Weyl(1, 0), m, t));
    CHECK(std::abs(coupling_F(p.right, p.left, m)) < 1e-15);
    CHECK(std::abs(p.right.squaredNorm() - 0.5) < 1e-15);
  }
  // Rates at m t = 3 pi / 4 and pi / 4.
  {
    const auto p = chiral_decompose(rest_superposition_fixture(a, a, Weyl(1, 0), m, 0.75 * std::numbers::pi / m));
    CHECK(std::abs(coupling_F(p.right, p.left, m) - m) < 1e-12);
    const auto r = jump_rates(p.right, p.left, m);
    CHECK(std::abs(r.t_LR - 2 * m) < 1e-11);
    CHECK(r.t_RL == 0.0);
  }
  {
    const auto p = chiral_decompose(rest_superposition_fixture(a, a, Weyl(1, 0), m, 0.25 * std::numbers::pi / m));
    const auto r = jump_rates(p.right, p.left, m);
    CHECK(std::abs(r.t_RL - 2 * m) < 1e-11);
    CHECK(r.t_LR == 0.0);
  }
  CHECK_THROWS(rest_superposition_fixture(1.0, 1.0, Weyl(1, 0), m, 0.0));
  CHECK_THROWS(rest_superposition_fixture(1.0, 0.0, Weyl(1, 1), m, 0.0));
}

TEST_CASE("3D free evolution", "[wave]") {
  const Grid g = Grid::cube(16, 10.0);
  const std::size_t n = g.cells();
  const double m = 0.8;
  SECTION("rest eigenstate") {
    DiracField3D init{g, {Field(n, 1.0 / std::sqrt(1000.0)), Field(n), Field(n), Field(n)}};
    const auto rec = evolve_3d(init, m, 2.0, 0.5);
    for (int fr = 0; fr < rec.frames; ++fr) {
      const cplx ph = std::exp(-I * (m * rec.time(fr)));
      CHECK(std::abs(rec.component(fr, 0)[17] - ph * init.psi[0][17]) < 1e-14);
      CHECK(std::abs(rec.component(fr, 2)[17]) < 1e-14);
    }
  }
  SECTION("massless helicity eigenstate") {
    const double p = 2 * std::numbers::pi * 2 / 10.0;
    DiracField3D init{g, {Field(n), Field(n), Field(n), Field(n)}};
    for (std::size_t q = 0; q < n; ++q) {
      const double z = g.coord(2, static_cast<int>(q % 16));
      const cplx w = std::exp(I * (p * z)) / std::sqrt(2000.0);
      init.psi[0][q] = w;
      init.psi[2][q] = w;
    }
    const auto rec = evolve_3d(init, 0.0, 1.5, 0.5);
    double err = 0.0;
    for (int fr = 0; fr < rec.frames; ++fr) {
      const cplx ph = std::exp(-I * (p * rec.time(fr)));
      for (int c = 0; c < 4; ++c)
        for (std::size_t q = 0; q < n; q += 37) err = std::max(err, std::abs(rec.component(fr, c)[q] - ph * init.psi[c][q]));
    }
    CHECK(err < 1e-12);
  }
  SECTION("Gaussian packet keeps unit norm") {
    DiracField3D init{g, {Field(n), Field(n), Field(n), Field(n)}};
    double norm = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      const double x = g.coord(0, static_cast<int>(q / 256)), y = g.coord(1, static_cast<int>((q / 16) % 16)),
                   z = g.coord(2, static_cast<int>(q % 16));
      const double e = std::exp(-(x * x + y * y + z * z) / 4.0);
      init.psi[0][q] = e * std::exp(I * (0.7 * z));
      init.psi[3][q] = 0.3 * e;
      norm += (std::norm(init.psi[0][q]) + std::norm(init.psi[3][q])) * g.cell_volume();
    }
    for (auto& c : init.psi)
      for (auto& v : c) v /= std::sqrt(norm);
    const auto rec = evolve_3d(init, m, 3.0, 0.5);
    for (int fr = 0; fr < rec.frames; ++fr) CHECK(std::abs(record_norm(rec, fr) - 1.0) < 1e-10 * (1 + rec.time(fr)));
  }
}

TEST_CASE("divergence residuals", "[wave]") {
  SECTION("massless plane wave") {
    const Grid g = Grid::line(64, 20.0);
    ChiralField1D init{g, Field(64), Field(64)};
    const double k = 2 * std::numbers::pi * 2 / 20.0;
    for (int i = 0; i < 64; ++i) {
      init.f[i] = std::exp(I * (k * g.coord(0, i))) / std::sqrt(40.0);
      init.g[i] = std::exp(I * (-k * g.coord(0, i))) / std::sqrt(40.0);
    }
    const auto rec = evolve_1d(init, 0.0, 1.0, 0.01);
    const auto r = divergence_residual(rec, 0.0);
    CHECK(r.right < 1e-8);
    CHECK(r.left < 1e-8);
  }
  SECTION("rest superposition on a grid") {
    const Grid g = Grid::line(16, 8.0);
    const cplx a = 1.0 / std::sqrt(2.0);
    // Box normalization makes the densities O(1/L); rescale to the unit-density fixture.
    ChiralField1D init = chiral_rest_superposition(g, a, a);
    for (auto& v : init.f) v *= std::sqrt(8.0);
    for (auto& v : init.g) v *= std::sqrt(8.0);
    const auto rec = evolve_1d(init, 1.0, 1.0, 1e-4);
    const auto r = divergence_residual(rec, 1.0);
    CHECK(r.right < 1e-8);
    CHECK(r.left < 1e-8);
  }
  SECTION("massless packets conserve each chirality") {
    const Grid g = Grid::line(256, 40.0);
    const auto init = chiral_packets(g, {{-2.0, 1.0, 0.5, 1.0, 0.0}, {2.0, 1.2, -0.3, 0.0, 0.8}});
    const auto rec = evolve_1d(init, 0.0, 0.2, 1e-3);
    const auto r = divergence_residual(rec, 0.0);
    CHECK(r.right < 1e-6);
    CHECK(r.left < 1e-6);
  }
}

TEST_CASE("record binary round trip is bit exact", "[wave][io]") {
  const Grid g = Grid::line(32, 10.0);
  const auto rec = evolve_1d(chiral_packets(g, {{0.0, 1.0, 0.4, 1.0, 0.5}}), 1.0, 0.3, 0.1);
  const auto dir = std::filesystem::temp_directory_path() / "zigzag_record_test";
  const std::string base = (dir / "rec").string();
  write_record(rec, base);
  const auto back = read_record(base);
  CHECK(back.kind == rec.kind);
  CHECK(back.frames == rec.frames);
  CHECK(back.grid == rec.grid);
  CHECK(std::memcmp(back.data.data(), rec.data.data(), rec.data.size() * sizeof(cplx)) == 0);
  std::filesystem::remove_all(dir);
}
