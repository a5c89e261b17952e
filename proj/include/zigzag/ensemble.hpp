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

#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "zigzag/models.hpp"
#include "zigzag/pdmp.hpp"
#include "zigzag/wave_record.hpp"

namespace zigzag {

// Positions from the summed density (piecewise-linear interpolant; inverse CDF
// in 1D, rejection in 2D/3D), label drawn with probability rho_c(x)/sum rho.
std::vector<ParticleState> sample_equilibrium(const Grid& grid, const std::vector<RealField>& densities,
                                              std::size_t n, std::uint64_t seed, double t);

// Precomputed sampling tables; draw(seed, i) uses the position and label
// streams of trajectory i, so draws can be paired across runs.
class EquilibriumSampler {
 public:
  EquilibriumSampler(const Grid& grid, std::vector<RealField> densities);

  ParticleState draw(std::uint64_t seed, std::uint64_t index, double t) const;
  Point draw_position(RandomStream& rng) const;
  int draw_label(const Point& x, RandomStream& rng) const;

 private:
  Grid grid_;
  std::vector<RealField> densities_;
  RealField total_;
  double total_max_ = 0.0;
  std::vector<double> cumulative_;  // 1D cell masses, running sum
};

// Multilinear periodic interpolation of grid values.
double linear_interpolate(const Grid& grid, const RealField& f, const double* x);

// Smallest b with b^3 >= n.
int default_bins(std::size_t n);

// Exact mass of the multilinear interpolant of `density` in each of
// bins^dim equal boxes covering the periodic domain (row-major).
std::vector<double> bin_masses(const Grid& grid, const RealField& density, int bins);
std::vector<double> histogram(const Grid& grid, const std::vector<Point>& positions, int bins);

// Half the L1 distance between normalized vectors.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);
// Expected TV of an n-sample multinomial histogram against its own p.
double expected_tv_noise(const std::vector<double>& p, std::size_t n);
// One-dimensional Kolmogorov-Smirnov statistic against the linear interpolant.
double ks_statistic(const Grid& grid, const RealField& density, std::vector<double> positions);

struct EnsembleOptions {
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::vector<double> checkpoints;
  PdmpOptions pdmp;
  int workers = 1;
  std::size_t keep = 0;  // trajectories with full samples/events retained
  int bins = 0;          // 0 means default_bins(n)
};

struct CheckpointStats {
  double t = 0.0;
  double tv_total = 0.0;
  std::vector<double> tv_label;
  std::vector<double> label_fraction;
  std::vector<double> label_target;
  double ks = -1.0;  // 1D only
  double tv_noise = 0.0;
};

struct EnsembleReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  int bins = 0;
  std::vector<std::string> labels;
  std::vector<CheckpointStats> checkpoints;
  double jump_mean = 0.0;
  double jump_var = 0.0;
  TrajectoryStats stats;
  double min_density_hit = 0.0;  // fraction of evaluations flagged degenerate
};

struct EnsembleRun {
  EnsembleReport report;
  std::vector<Trajectory> kept;
  std::vector<std::vector<ParticleState>> states;  // [checkpoint][trajectory]
  std::vector<std::uint64_t> jump_counts;
};

// Evolve the given initial states; compare checkpoint states with `target`
// label densities (default: the model's equilibrium densities).
using TargetFn = std::function<std::vector<RealField>(int checkpoint, double t)>;
EnsembleRun run_ensemble(const GuidanceModel& model, const std::vector<ParticleState>& init, double t_final,
                         const EnsembleOptions& options, TargetFn target = nullptr);

// Sample from the model's equilibrium at t_begin and run to the last checkpoint.
EnsembleRun equivariance_test(const GuidanceModel& model, const EnsembleOptions& options);

CheckpointStats compare_states(const Grid& grid, const std::vector<RealField>& target,
                               const std::vector<ParticleState>& states, int bins, double t);

nlohmann::json report_json(const EnsembleReport& r);

// Master equations on the grid.
struct FlowFrame {
  std::vector<std::array<RealField, 3>> velocity;         // [label][axis]
  std::vector<std::vector<std::pair<int, RealField>>> out;  // [label] -> (target, rate)
};
using FlowProvider = std::function<FlowFrame(int frame)>;

// Flow of a tabulated model; velocities and rates vanish where the velocity
// denominator is below mask_fraction times its frame maximum.
FlowProvider tabulated_flow(const TabulatedModel& model, double mask_fraction = 1e-10);

// Method of lines with RK4 in time and spectral divergence; each RK4 step spans
// two frames so the midpoint is a stored frame. Returns p at the requested
// frames (must be even offsets from frame_begin).
std::vector<std::vector<RealField>> integrate_master_mol(const Grid& grid, int labels, const FlowProvider& flow,
                                                         double stride, int frame_begin,
                                                         std::vector<RealField> p0,
                                                         const std::vector<int>& out_frames);

// Chiral 1D master equation: exact shift transport at speed +-1 and exact
// two-state gain/loss, Strang split with the rates of the bracketing frames.
std::vector<std::vector<RealField>> master_equation_dirac1d(const WaveRecord& rec, const RealField& pR0,
                                                            const RealField& pL0,
                                                            const std::vector<int>& out_frames);

}  // namespace zigzag
