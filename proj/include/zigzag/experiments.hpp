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

// Pinned reference runs shared by `zigzag verify` and the acceptance tests.
// Each function only sets up and runs; pass/fail thresholds live with the
// callers.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "zigzag/ensemble.hpp"
#include "zigzag/scenario.hpp"

namespace zigzag {

// Reference scenarios by name: superposed_gaussian, entangled_pair,
// pauli_packet, spin_split_x, reim_bump, rotation_y, rotation_z.
Scenario reference_scenario(const std::string& name);

// Ensemble statistics of a prepared run at the scenario checkpoints.
EnsembleRun reference_ensemble(const PreparedRun& run, const Scenario& s, std::size_t n, std::uint64_t seed,
                               int workers);

// Master equation from a non-equilibrium start (all weight on L with the
// equilibrium position density) against an ensemble started from the same
// densities. One entry per checkpoint.
struct MasterComparison {
  std::vector<double> t;
  std::vector<double> tv;
  std::vector<double> tv_noise;
  std::vector<double> fraction_R_pde;
  std::vector<double> fraction_R_ensemble;
};
MasterComparison nonequilibrium_master_check(const WaveRecord& rec, const GuidanceModel& model,
                                             const std::vector<double>& checkpoints, std::size_t n,
                                             std::uint64_t seed, int workers);

// Two ensembles of different models on the same position density, started
// from the same seeds.
struct PairedComparison {
  double tv_a = 0.0;          // ensemble a vs its target total density
  double tv_b = 0.0;          // ensemble b (mapped back) vs the same target
  double tv_ab = 0.0;         // between the two empirical histograms
  double noise = 0.0;         // expected TV of one ensemble against its target
  double max_deviation = 0.0; // max over trajectories of the final position distance
  double integrator_tolerance = 0.0;  // step-halving deviation of a deterministic control
  double control_deviation = 0.0;     // deviation of the deterministic control under the same change
  double fraction_deviating = 0.0;    // trajectories deviating by more than 10x the tolerance
  double jump_mean_a = 0.0, jump_mean_b = 0.0;
};

// Real/imaginary split with and without the gauge function
// 0.7 sin(2 pi z / L) + 0.3; the Bohm flow of the same record is the control.
PairedComparison gauge_experiment(std::size_t n, std::uint64_t seed, int workers);

// Spin split with B = y-hat versus the quarter-turn rotated problem
// (B = z-hat, rotated data) mapped back. The rotated run has no exchange, so
// it doubles as the deterministic control.
PairedComparison rotation_experiment(std::size_t n, std::uint64_t seed, int workers);

}  // namespace zigzag
