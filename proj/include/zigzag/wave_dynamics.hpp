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
#include <cstddef>
#include <vector>

#include "zigzag/guidance.hpp"
#include "zigzag/wave_record.hpp"

namespace zigzag {

constexpr std::size_t kDefaultMemoryCap = std::size_t(2048) << 20;

// Spin frozen up along z: f is the right-handed and g the left-handed
// amplitude; i(d_t + d_z) f = m g, i(d_t - d_z) g = m f. The grid axis is z.
struct ChiralField1D {
  Grid grid;
  Field f;
  Field g;
};

struct DiracField3D {
  Grid grid;
  std::array<Field, 4> psi;  // Dirac-Pauli order
};

struct ChiralPacket {
  double center = 0.0;
  double width = 1.0;  // standard deviation of |f|^2 + |g|^2
  double momentum = 0.0;
  cplx amp_R = 1.0;
  cplx amp_L = 0.0;
};

// Normalized sum of Gaussian packets.
ChiralField1D chiral_packets(const Grid& grid, const std::vector<ChiralPacket>& packets);
// Spatially constant rest superposition with spin up at t = 0.
ChiralField1D chiral_rest_superposition(const Grid& grid, cplx a, cplx b);

struct DiracPacket {
  Vec3 center = Vec3::Zero();
  double width = 1.0;  // standard deviation of psi^dag psi along each axis
  Vec3 momentum = Vec3::Zero();
  Dirac spinor = Dirac(1.0, 0.0, 0.0, 0.0);
};

// Normalized sum of Gaussian packets with constant spinors on a 3D grid.
DiracField3D dirac_packets(const Grid& grid, const std::vector<DiracPacket>& packets);

// Per-mode exact propagation. Frames at t = k*dt, k = 0..round(t_final/dt).
WaveRecord evolve_1d(const ChiralField1D& initial, double m, double t_final, double dt,
                     std::size_t cap_bytes = kDefaultMemoryCap);
WaveRecord evolve_3d(const DiracField3D& initial, double m, double t_final, double dt,
                     std::size_t cap_bytes = kDefaultMemoryCap);

// Frames needed to reach t_final in steps of dt (validates both).
int frame_count(double t_final, double dt);
void require_finite(const Field& f, const char* what);

// Analytic rest-frame superposition of positive and negative energy states.
Dirac rest_superposition_fixture(cplx a, cplx b, const Weyl& chi, double m, double t);

// Chiral spinors of one cell of a dirac1d or dirac3d record frame.
ChiralPair record_chiral_pair(const WaveRecord& rec, int frame, std::size_t cell);
ChiralPair chiral_pair_from_components(const WaveRecord& rec, const cplx* comps);

struct DivergenceResidual {
  double right = 0.0;  // max |d_t rho_R + div j_R - F|
  double left = 0.0;   // max |d_t rho_L + div j_L + F|
};

DivergenceResidual divergence_residual(const WaveRecord& rec, double m);

double record_norm(const WaveRecord& rec, int frame);

}  // namespace zigzag
