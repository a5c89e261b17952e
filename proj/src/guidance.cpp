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

#include "zigzag/guidance.hpp"

#include <algorithm>

namespace zigzag {

VelocityResult velocity_field(const Weyl& phi, Chirality c, double floor) {
  VelocityResult r;
  const double rho = phi.squaredNorm();
  if (!(rho > floor) || rho == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.v = (static_cast<double>(sign(c)) / rho) * bloch(phi);
  return r;
}

double capped_rate(double numerator, double density, const NodePolicy& policy) {
  if (numerator <= 0.0) return 0.0;
  if (!(density > policy.floor) || density == 0.0) return policy.cap;
  return std::min(numerator / density, policy.cap);
}

RatePair jump_rates(const Weyl& phi_R, const Weyl& phi_L, double m, const NodePolicy& policy) {
  const double F = coupling_F(phi_R, phi_L, m);
  RatePair r;
  // Only the branch selected by the sign of F is ever nonzero.
  if (F > 0.0) r.t_LR = capped_rate(F, phi_L.squaredNorm(), policy);
  if (F < 0.0) r.t_RL = capped_rate(-F, phi_R.squaredNorm(), policy);
  return r;
}

VelocityResult bohm_velocity(const Dirac& psi, double floor) {
  VelocityResult r;
  const double rho = psi.squaredNorm();
  if (!(rho > floor) || rho == 0.0) {
    r.degenerate = true;
    return r;
  }
  // alpha_k = [[0, sigma_k], [sigma_k, 0]] so psi^dagger alpha psi = 2 Re(phi~^dagger sigma chi~).
  const Weyl up = psi.head<2>();
  const Weyl low = psi.tail<2>();
  Vec3 j;
  for (int k = 0; k < 3; ++k) j(k) = 2.0 * up.dot(pauli(k) * low).real();
  r.v = j / rho;
  return r;
}

GuidanceSample guidance_sample(const Weyl& phi_R, const Weyl& phi_L, double m, const NodePolicy& policy) {
  GuidanceSample s;
  s.rho_R = phi_R.squaredNorm();
  s.rho_L = phi_L.squaredNorm();
  s.v_R = velocity_field(phi_R, Chirality::R, policy.floor).v;
  s.v_L = velocity_field(phi_L, Chirality::L, policy.floor).v;
  s.rates = jump_rates(phi_R, phi_L, m, policy);
  return s;
}

}  // namespace zigzag
