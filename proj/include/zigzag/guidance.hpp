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

#include "zigzag/spinor.hpp"

namespace zigzag {

struct RatePair {
  double t_LR = 0.0;  // L -> R
  double t_RL = 0.0;  // R -> L
};

// Nodes: below `floor` a density is treated as zero. Rates out of a label whose
// density is below the floor are clamped to `cap` when their numerator is
// positive; velocities there are reported as degenerate.
struct NodePolicy {
  double floor = 0.0;
  double cap = 1e300;
};

struct VelocityResult {
  Vec3 v = Vec3::Zero();
  bool degenerate = false;
};

// s(c) phi^dagger sigma phi / phi^dagger phi.
VelocityResult velocity_field(const Weyl& phi, Chirality c, double floor = 0.0);

// Minimal rates t_LR = F^+/rho_L, t_RL = (-F)^+/rho_R.
RatePair jump_rates(const Weyl& phi_R, const Weyl& phi_L, double m, const NodePolicy& policy = {});

// Rate numerator over density with the node policy applied; numerator must be >= 0.
double capped_rate(double numerator, double density, const NodePolicy& policy);

// psi^dagger alpha psi / psi^dagger psi.
VelocityResult bohm_velocity(const Dirac& psi, double floor = 0.0);

struct GuidanceSample {
  Vec3 v_R = Vec3::Zero();
  Vec3 v_L = Vec3::Zero();
  RatePair rates;
  double rho_R = 0.0;
  double rho_L = 0.0;
};

GuidanceSample guidance_sample(const Weyl& phi_R, const Weyl& phi_L, double m, const NodePolicy& policy = {});

}  // namespace zigzag
