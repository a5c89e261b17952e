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
#include <nlohmann/json.hpp>
#include <string>

#include "zigzag/fft.hpp"
#include "zigzag/wave_dynamics.hpp"

namespace zigzag {

// Pauli grids carry physical axes: a 1D grid is the z axis, a 2D grid is (y, z).
int physical_axis(const Grid& g, int grid_axis);
int grid_axis_of(const Grid& g, int physical);  // -1 when the axis is not resolved

struct PotentialSpec {
  std::string preset = "none";  // none | uniform_b | linear_v | gaussian_bump | periodic_a
  Vec3 b = Vec3::Zero();        // uniform_b
  double field = 0.0;           // linear_v: E = field * z-hat, V = -field * z
  double height = 0.0;          // gaussian_bump
  double width = 1.0;
  Vec3 center = Vec3::Zero();
  double amplitude = 0.0;  // periodic_a: A_x = amplitude * sin(2 pi z / L)
};

nlohmann::json to_json(const PotentialSpec& p);
PotentialSpec potential_from_json(const nlohmann::json& j);

// Static potentials sampled on the grid, with E = -grad V and B analytic.
// A uniform_b field is a pure Zeeman term: B is not the curl of the stored A.
struct Potentials {
  PotentialSpec spec;
  RealField V;
  std::array<RealField, 3> A, E, B;
  bool has_vector_potential = false;
  bool zeeman_only = false;
};

Potentials make_potentials(const Grid& grid, const PotentialSpec& spec);

using Spinor2Field = std::array<Field, 2>;

struct PauliField {
  Grid grid;
  Spinor2Field phi;
  double mass = 1.0;
  double charge = 1.0;
  Potentials pot;
};

struct PauliGaussian {
  Vec3 center = Vec3::Zero();
  double width = 1.0;  // standard deviation of |phi|^2
  Vec3 momentum = Vec3::Zero();
  Weyl spin = Weyl(1.0, 0.0);
};

// Normalized sum of Gaussian packets.
Spinor2Field pauli_packets(const Grid& grid, const std::vector<PauliGaussian>& packets);

// Spectral D = grad - i e A and friends on a Pauli grid.
class PauliOps {
 public:
  PauliOps(const Grid& grid, const Potentials& pot, double mass, double charge);

  Field d(const Field& f, int physical) const;
  Spinor2Field D(const Spinor2Field& phi, int physical) const;
  Spinor2Field sigma_dot_D(const Spinor2Field& phi) const;
  // H phi = -(1/2m) D^2 phi - (e/2m) B.sigma phi + e V phi
  Spinor2Field hamiltonian(const Spinor2Field& phi) const;
  RealField div(const std::array<RealField, 3>& v) const;
  std::array<RealField, 3> curl(const std::array<RealField, 3>& v) const;
  RealField d(const RealField& f, int physical) const;

  const Grid& grid() const { return grid_; }
  const Potentials& pot() const { return pot_; }
  double mass() const { return m_; }
  double charge() const { return e_; }

 private:
  Grid grid_;
  Potentials pot_;
  double m_, e_;
  Spectral sp_;
};

WaveRecord pauli_evolve(const PauliField& initial, double t_final, double dt,
                        std::size_t cap_bytes = kDefaultMemoryCap);

PauliField pauli_frame(const WaveRecord& rec, const Potentials& pot, int frame);
Potentials record_potentials(const WaveRecord& rec);

}  // namespace zigzag
