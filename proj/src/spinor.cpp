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

#include "zigzag/spinor.hpp"

#include <array>
#include <cmath>

namespace zigzag {

namespace {

const cplx I(0.0, 1.0);

std::array<Eigen::Matrix2cd, 3> make_pauli() {
  std::array<Eigen::Matrix2cd, 3> s;
  s[0] << 0, 1, 1, 0;
  s[1] << 0, -I, I, 0;
  s[2] << 1, 0, 0, -1;
  return s;
}

std::array<Eigen::Matrix4cd, 5> make_gamma() {
  std::array<Eigen::Matrix4cd, 5> g;
  g[0].setZero();
  g[0].topLeftCorner<2, 2>().setIdentity();
  g[0].bottomRightCorner<2, 2>() = -Eigen::Matrix2cd::Identity();
  for (int k = 0; k < 3; ++k) {
    g[k + 1].setZero();
    g[k + 1].topRightCorner<2, 2>() = pauli(k);
    g[k + 1].bottomLeftCorner<2, 2>() = -pauli(k);
  }
  g[4].setZero();
  g[4].topRightCorner<2, 2>().setIdentity();
  g[4].bottomLeftCorner<2, 2>().setIdentity();
  return g;
}

const std::array<Eigen::Matrix4cd, 5>& gammas() {
  static const std::array<Eigen::Matrix4cd, 5> g = make_gamma();
  return g;
}

}  // namespace

const Eigen::Matrix2cd& pauli(int axis) {
  static const std::array<Eigen::Matrix2cd, 3> s = make_pauli();
  return s[axis];
}

const Eigen::Matrix4cd& gamma(int mu) { return gammas()[mu]; }
const Eigen::Matrix4cd& gamma5() { return gammas()[4]; }

Vec3 bloch(const Weyl& phi) {
  // Written out to avoid three small matrix products per call.
  const cplx cross = std::conj(phi(0)) * phi(1);
  return Vec3(2.0 * cross.real(), 2.0 * cross.imag(), std::norm(phi(0)) - std::norm(phi(1)));
}

ChiralPair chiral_decompose(const Dirac& psi) {
  const double r = 1.0 / std::sqrt(2.0);
  ChiralPair out;
  out.right = r * (psi.head<2>() + psi.tail<2>());
  out.left = r * (psi.head<2>() - psi.tail<2>());
  return out;
}

Dirac assemble(const Weyl& phi_R, const Weyl& phi_L) {
  const double r = 1.0 / std::sqrt(2.0);
  Dirac psi;
  psi.head<2>() = r * (phi_R + phi_L);
  psi.tail<2>() = r * (phi_R - phi_L);
  return psi;
}

ChiralCurrents chiral_currents(const Weyl& phi_R, const Weyl& phi_L) {
  ChiralCurrents c;
  c.rho_R = phi_R.squaredNorm();
  c.rho_L = phi_L.squaredNorm();
  c.j_R = bloch(phi_R);
  c.j_L = -bloch(phi_L);
  return c;
}

double coupling_F(const Weyl& phi_R, const Weyl& phi_L, double m) {
  return 2.0 * m * phi_R.dot(phi_L).imag();
}

double coupling_F_dirac(const Dirac& psi, double m) {
  const Eigen::Matrix4cd one = Eigen::Matrix4cd::Identity();
  const Dirac psi_R = 0.5 * (one + gamma5()) * psi;
  const Dirac psi_L = 0.5 * (one - gamma5()) * psi;
  return 2.0 * m * psi_R.dot(gamma(0) * psi_L).imag();
}

}  // namespace zigzag
