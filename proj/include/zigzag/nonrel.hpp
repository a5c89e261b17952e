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

#include <array>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "zigzag/models.hpp"
#include "zigzag/pauli.hpp"

namespace zigzag {

using Vec3Field = std::array<RealField, 3>;  // physical x, y, z components

// Currents and coupling of the large-component expansion, each order kept
// separately. Index c: 0 = R, 1 = L.
struct CurrentExpansion {
  Grid grid;
  RealField density;  // phi^dag phi
  Vec3Field spin;     // phi^dag sigma phi
  Vec3Field pauli_current;
  std::array<std::array<RealField, 3>, 2> j0;  // [c][order]
  std::array<std::array<Vec3Field, 3>, 2> j;   // [c][order]
  // F[1] = Re(phi^dag sigma.D phi) and F[3] from the small-component expansion;
  // F[0] = F[2] = 0.
  std::array<RealField, 4> F;
  RealField F1_divergence;  // (1/2) div(phi^dag sigma phi)
};

CurrentExpansion expand_currents(const PauliField& field);

struct IdentityResiduals {
  // div j_{c,0} - s(c) F1; d_t j0_{c,0} + div j_{c,1}; d_t j0_{c,1} + div j_{c,2} - s(c) F3;
  // then the three null-current relations.
  static constexpr int kCount = 6;
  static const std::array<const char*, kCount> names;
  std::array<double, kCount> max{};
  std::array<double, kCount> mean{};
};

// Time derivatives come from the Pauli right-hand side, not from stored frames.
IdentityResiduals identity_residuals(const PauliField& field);
nlohmann::json identity_report(const IdentityResiduals& r, const Grid& grid, const std::string& preset);

enum class NRModel { kPauliA, kPauliB, kTruncated1, kTruncated2 };
NRModel nr_model_from_string(const std::string& s);
const char* nr_model_name(NRModel m);

struct NRGuidance {
  std::array<RealField, 2> density;       // equilibrium / sampling density per chirality
  std::array<RealField, 2> velocity_den;  // denominator shared by velocity and rate
  std::array<Vec3Field, 2> velocity_num;
  std::array<RealField, 2> kappa;
  RealField gain_x, gain_y;  // net gain of R is [-X]^+ ... see TabulatedModel
};

// Pointwise guidance data; entries are zeroed where phi^dag phi < mask * max.
NRGuidance nr_guidance(const CurrentExpansion& ex, NRModel model, double mask = 1e-10);

// Velocity (3-vector) and leaving rate of chirality c, zero where masked.
Vec3Field nr_velocity(const NRGuidance& g, int c);
RealField nr_rate(const NRGuidance& g, int c);

// Throws kNumerical naming the offending region if a model-A density is not
// positive where phi^dag phi exceeds 1e-8 of its maximum.
void check_positive_density(const NRGuidance& g, const CurrentExpansion& ex);

std::shared_ptr<TabulatedModel> build_nr_model(const WaveRecord& pauli, NRModel model, int frame_step = 1,
                                               std::size_t cap_bytes = kDefaultMemoryCap);

// Closed forms for phi = psi xi with vanishing potentials.
struct SpinEigenForms {
  std::array<Vec3Field, 2> v_pauli;  // bar v_c
  std::array<RealField, 2> t_pauli;  // bar t_c
  std::array<Vec3Field, 2> v_dirac;  // order-1 Dirac truncation
  std::array<RealField, 2> t_dirac;
};
SpinEigenForms spin_eigenstate_forms(const Grid& grid, const Field& psi, const Weyl& xi, double m,
                                     double mask = 1e-10);

// Chiral velocities of the positive-energy Dirac spinor whose upper component
// is phi (vanishing potentials).
std::array<Vec3Field, 2> positive_energy_velocities(const PauliField& field);

// max over chiralities and points with phi^dag phi > density_fraction * max of
// |exact v_c - order-1 truncated v_c|.
double truncation_deviation(const PauliField& field, double density_fraction = 1e-3);

// L1 distance between the summed label densities transported by the model's
// master equation and phi^dag phi at the record's last even frame.
double nr_density_drift(const TabulatedModel& model, const WaveRecord& pauli, int frame_step);

}  // namespace zigzag
