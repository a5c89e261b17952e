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

// Two alternative jump models built from a two-way split of the wave function:
// the Pauli spin components along z, and the real and imaginary parts of a
// scalar Schrodinger wave function. In both, label i carries density rho_i,
// velocity j_i / rho_i and the exchange term I enters as
//   d_t rho_1 + div j_1 = I,   d_t rho_2 + div j_2 = -I,
// with rates I^+ / rho_2 (2 -> 1) and (-I)^+ / rho_1 (1 -> 2).

#include <array>
#include <memory>

#include "zigzag/models.hpp"
#include "zigzag/nonrel.hpp"
#include "zigzag/pauli.hpp"

namespace zigzag {

struct SplitSample {
  std::array<RealField, 2> density;
  std::array<Vec3Field, 2> current;
  std::array<Vec3Field, 2> velocity;  // zero where the density is masked
  RealField exchange;                 // I
};

// Rates of the split model at q: {rate out of label 0, rate out of label 1}.
std::array<double, 2> split_rates(const SplitSample& s, std::size_t q);

// Spin-up / spin-down split of a Pauli spinor.
SplitSample spin_split_guidance(const PauliField& f, double mask = 1e-10);
// max |d_t rho_i + div j_i -/+ I| with d_t phi = -i H phi, over i = 1, 2.
double spin_split_continuity_residual(const PauliField& f);

// Scalar wave function with physical-axis vector potential A and potential
// energy U: i d_t psi = -(1/2m) D^2 psi + U psi, D = grad - i e A.
struct ScalarField {
  Grid grid;  // Pauli axis convention: 1D is z, 2D is (y, z)
  Field psi;
  double mass = 1.0;
  double charge = 1.0;
  Vec3Field A;
  RealField U;
};

SplitSample reim_split_guidance(const ScalarField& f, double mask = 1e-10);
double reim_split_continuity_residual(const ScalarField& f);
// (Im(psi^* grad psi) - e A |psi|^2) / (m |psi|^2).
Vec3Field dbb_velocity(const ScalarField& f, double mask = 1e-10);

// theta = offset + amplitude * sin(2 pi x / L) along the first grid axis.
struct GaugeSpec {
  double amplitude = 0.0;
  double offset = 0.0;
};
RealField gauge_function(const Grid& grid, const GaugeSpec& g);
// psi -> exp(i e theta) psi, A -> A + grad theta.
ScalarField gauge_transform(const ScalarField& f, const RealField& theta);

// Scalar field of a Pauli frame whose lower spin component vanishes and on
// which no magnetic field acts.
ScalarField scalar_from_pauli(const PauliField& f);

std::shared_ptr<TabulatedModel> build_spin_split_model(const WaveRecord& pauli, int frame_step = 1,
                                                       std::size_t cap_bytes = kDefaultMemoryCap);
std::shared_ptr<TabulatedModel> build_reim_split_model(const WaveRecord& pauli, const GaugeSpec& gauge = {},
                                                       int frame_step = 1,
                                                       std::size_t cap_bytes = kDefaultMemoryCap);

// Deterministic Bohm flow of the same scalar record, as a control. Label "D"
// carries |psi|^2 and the Bohm velocity; label "-" is empty and never entered.
std::shared_ptr<TabulatedModel> build_scalar_bohm_model(const WaveRecord& pauli, const GaugeSpec& gauge = {},
                                                        int frame_step = 1,
                                                        std::size_t cap_bytes = kDefaultMemoryCap);

// Rotate a 2D (y, z) Pauli field by a quarter turn about x:
// phi'(y, z) = U phi(z, -y), U = (1 - i sigma_x) / sqrt(2).
Spinor2Field rotate_quarter_x(const Grid& grid, const Spinor2Field& phi);
// Image of a point under the same rotation: (y, z) -> (-z, y).
std::array<double, 2> rotate_point_quarter_x(const std::array<double, 2>& yz);

}  // namespace zigzag
