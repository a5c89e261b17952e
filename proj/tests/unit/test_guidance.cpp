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

#include "catch_amalgamated.hpp"
#include "support/generators.hpp"
#include "zigzag/guidance.hpp"

using namespace zigzag;
using zigzag::testing::Gen;

TEST_CASE("chiral velocities are unit vectors along the spin", "[guidance]") {
  Gen gen(11);
  for (int n = 0; n < 100000; ++n) {
    const Weyl phi = gen.weyl();
    const auto vr = velocity_field(phi, Chirality::R);
    const auto vl = velocity_field(phi, Chirality::L);
    REQUIRE(!vr.degenerate);
    CHECK(std::abs(vr.v.norm() - 1.0) < 1e-12);
    CHECK((vr.v + vl.v).norm() < 1e-12);
    // Oracle: expectation of the Pauli matrices.
    Vec3 s;
    for (int a = 0; a < 3; ++a) s(a) = (phi.adjoint() * pauli(a) * phi)(0, 0).real() / phi.squaredNorm();
    CHECK((vr.v - s).norm() < 1e-12);
  }
  CHECK(velocity_field(Weyl::Zero(), Chirality::R).degenerate);
  CHECK(velocity_field(Weyl(1e-9, 0), Chirality::R, 1e-12).degenerate);
}

TEST_CASE("jump rates are minimal and balance the coupling", "[guidance]") {
  Gen gen(12);
  for (int n = 0; n < 100000; ++n) {
    const Weyl r = gen.weyl(), l = gen.weyl();
    const double m = gen.uniform(0.0, 5.0);
    const auto rates = jump_rates(r, l, m);
    const double F = coupling_F(r, l, m);
    CHECK(rates.t_LR >= 0.0);
    CHECK(rates.t_RL >= 0.0);
    CHECK(rates.t_LR * rates.t_RL == 0.0);
    const double scale = std::abs(F) + 1e-300;
    CHECK(std::abs(rates.t_LR * l.squaredNorm() - rates.t_RL * r.squaredNorm() - F) <= 1e-12 * scale);
  }
}

TEST_CASE("rate floor and cap", "[guidance]") {
  NodePolicy p{1e-6, 50.0};
  CHECK(capped_rate(1.0, 1.0, p) == 1.0);
  CHECK(capped_rate(-1.0, 1.0, p) == 0.0);
  CHECK(capped_rate(1.0, 1e-9, p) == 50.0);
  CHECK(capped_rate(1e-5, 1e-9, p) == 50.0);
  CHECK(capped_rate(0.0, 0.0, p) == 0.0);
}

TEST_CASE("Bohm velocity is the density-weighted chiral average", "[guidance]") {
  Gen gen(13);
  Eigen::Matrix4cd alpha[3];
  for (int a = 0; a < 3; ++a) alpha[a] = gamma(0) * gamma(a + 1);
  for (int n = 0; n < 20000; ++n) {
    const Dirac psi = gen.dirac();
    const auto vb = bohm_velocity(psi);
    // Oracle: psi^dagger alpha psi / psi^dagger psi.
    Vec3 ref;
    for (int a = 0; a < 3; ++a) ref(a) = (psi.adjoint() * alpha[a] * psi)(0, 0).real() / psi.squaredNorm();
    CHECK((vb.v - ref).norm() < 1e-12);
    CHECK(vb.v.norm() <= 1.0 + 1e-12);
    const auto p = chiral_decompose(psi);
    const auto s = guidance_sample(p.right, p.left, 1.0);
    const Vec3 mix = (s.rho_R * s.v_R + s.rho_L * s.v_L) / (s.rho_R + s.rho_L);
    CHECK((mix - ref).norm() < 1e-12);
  }
}
