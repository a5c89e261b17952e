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
#include <string>
#include <vector>

#include "zigzag/guidance.hpp"
#include "zigzag/pdmp.hpp"
#include "zigzag/wave_dynamics.hpp"

namespace zigzag {

// Two particles on a periodic line. Sector c = 2*c1 + c2 with R = 0, L = 1;
// spin index a = 2*a1 + a2 with up = 0. Component index = 4*c + a.
constexpr int kSectors = 4;
constexpr int kComponents2P = 16;

inline int sector_of(int c1, int c2) { return 2 * c1 + c2; }
inline int sector_chirality(int sector, int particle) { return particle == 0 ? sector >> 1 : sector & 1; }
inline int flip_sector(int sector, int particle) { return sector ^ (particle == 0 ? 2 : 1); }
std::string sector_name(int sector);

using Block2P = std::array<cplx, kComponents2P>;

// One particle with chirality and spin: components R-up, R-down, L-up, L-down.
struct ParticleSpinor1D {
  Grid grid;
  std::array<Field, 4> u;
};

ParticleSpinor1D particle_from_chiral(const ChiralField1D& f);

struct SectorField2P {
  Grid grid;  // square grid over (z1, z2)
  std::array<Field, kComponents2P> phi;
};

SectorField2P product_state(const ParticleSpinor1D& a, const ParticleSpinor1D& b);

// Gaussian product envelope with sector-dependent spin state
// cos(theta_c) |up up> + sin(theta_c) |down down>, amplitude amp[c].
struct EntangledSpec {
  double center1 = -1.5, center2 = 1.5;
  double width = 1.0;
  double momentum1 = 0.0, momentum2 = 0.0;
  std::array<cplx, kSectors> amp{1.0, 0.5, 0.5, 0.25};
  std::array<double, kSectors> theta{0.3, 0.3, 1.1, 1.1};
};
SectorField2P entangled_packets(const Grid& line, const EntangledSpec& spec);

// phi_{(c1,c2),(a1,a2)}(z1,z2) -> phi_{(c2,c1),(a2,a1)}(z2,z1)
SectorField2P exchange(const SectorField2P& f);
SectorField2P antisymmetrize(const SectorField2P& f);
double norm_2p(const SectorField2P& f);
void normalize(SectorField2P& f);

WaveRecord evolve_2p(const SectorField2P& initial, double m, double t_final, double dt,
                     std::size_t cap_bytes = kDefaultMemoryCap);

struct Velocity2P {
  double v1 = 0.0, v2 = 0.0;
  bool degenerate = false;
};

Velocity2P velocities_2p(const Block2P& phi, int sector, double floor = 0.0);
double rates_2p(const Block2P& phi, int sector, int particle, double m, const NodePolicy& policy = {});
double sector_density(const Block2P& phi, int sector);

Block2P record_block(const WaveRecord& rec, int frame, std::size_t cell);

std::array<double, kSectors> sector_populations(const WaveRecord& rec, int frame);
double antisymmetry_residual(const WaveRecord& rec);
// max |d_t rho_c + sum_i d_i(rho_c v_ic) - sum_i 2m Im(phi_c^dag phi_{pi_i c})| over the record.
double sector_balance_residual(const WaveRecord& rec);
double max_speed_2p(const WaveRecord& rec, int frame);

class TwoParticleModel : public GuidanceModel {
 public:
  explicit TwoParticleModel(std::shared_ptr<const WaveRecord> record);

  const Grid& grid() const override { return rec_->grid; }
  int label_count() const override { return kSectors; }
  std::string label_name(int label) const override { return sector_name(label); }
  double t_begin() const override { return rec_->t0; }
  double t_end() const override { return rec_->t_end(); }
  double frame_stride() const override { return rec_->stride; }
  double rate_cap() const override { return policy_.cap; }
  GuidanceEval evaluate(const double* x, double t, int label) const override;
  std::vector<RealField> label_densities(double t) const override;

 private:
  std::shared_ptr<const WaveRecord> rec_;
  NodePolicy policy_;
};

}  // namespace zigzag
