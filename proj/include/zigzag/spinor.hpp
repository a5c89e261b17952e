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

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace zigzag {

using cplx = std::complex<double>;
using Weyl = Eigen::Vector2cd;
using Dirac = Eigen::Vector4cd;
using Vec3 = Eigen::Vector3d;

// Dirac spinors are stored in the Dirac-Pauli representation with component
// order (phi~_1, phi~_2, chi~_1, chi~_2).

enum class Chirality : int { R = 0, L = 1 };

constexpr int sign(Chirality c) { return c == Chirality::R ? 1 : -1; }
constexpr Chirality flip(Chirality c) { return c == Chirality::R ? Chirality::L : Chirality::R; }
constexpr char label_char(Chirality c) { return c == Chirality::R ? 'R' : 'L'; }

struct ChiralPair {
  Weyl right;
  Weyl left;
};

struct ChiralCurrents {
  double rho_R = 0.0;
  double rho_L = 0.0;
  Vec3 j_R = Vec3::Zero();
  Vec3 j_L = Vec3::Zero();
};

const Eigen::Matrix2cd& pauli(int axis);  // axis 0,1,2 -> sigma_x, sigma_y, sigma_z

// phi^dagger sigma phi (the Bloch vector scaled by the density).
Vec3 bloch(const Weyl& phi);

ChiralPair chiral_decompose(const Dirac& psi);
Dirac assemble(const Weyl& phi_R, const Weyl& phi_L);

ChiralCurrents chiral_currents(const Weyl& phi_R, const Weyl& phi_L);

// F = 2m Im(phi_R^dagger phi_L); source of the right-handed current.
double coupling_F(const Weyl& phi_R, const Weyl& phi_L, double m);

// Same quantity from the 4-spinor picture, 2m Im(psi_R^dagger gamma^0 psi_L).
double coupling_F_dirac(const Dirac& psi, double m);

// Dirac-Pauli gamma matrices, mu = 0..3, and gamma_5.
const Eigen::Matrix4cd& gamma(int mu);
const Eigen::Matrix4cd& gamma5();

}  // namespace zigzag
