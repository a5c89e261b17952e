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
#include <cstdint>
#include <string>
#include <vector>

#include "zigzag/grid.hpp"
#include "zigzag/rng.hpp"

namespace zigzag {

using Point = std::array<double, 3>;

struct JumpChannel {
  int target = 0;
  double rate = 0.0;
};

// Guidance data at one configuration point for the current label.
struct GuidanceEval {
  Point v{};
  int channels = 0;
  std::array<JumpChannel, 2> jump{};
  bool degenerate = false;    // current-label density below the node floor
  bool minimal = true;        // the reverse rate at this point vanishes
  double speed_excess = 0.0;  // model-specific speed diagnostic
  double total_rate() const {
    double r = 0.0;
    for (int i = 0; i < channels; ++i) r += jump[i].rate;
    return r;
  }
};

// A velocity-jump process on a periodic configuration grid: for each label a
// velocity field and rates to other labels.
class GuidanceModel {
 public:
  virtual ~GuidanceModel() = default;
  virtual const Grid& grid() const = 0;
  virtual int label_count() const = 0;
  virtual std::string label_name(int label) const = 0;
  virtual double t_begin() const = 0;
  virtual double t_end() const = 0;
  virtual double frame_stride() const = 0;
  virtual double rate_cap() const = 0;
  virtual GuidanceEval evaluate(const double* x, double t, int label) const = 0;
  // Equilibrium density per label on the grid at the frame nearest t.
  virtual std::vector<RealField> label_densities(double t) const = 0;
  // True when every non-degenerate velocity has unit norm.
  virtual bool luminal() const { return false; }
};

struct ParticleState {
  Point x{};
  int label = 0;
  double t = 0.0;
};

struct TrajectorySample {
  double t = 0.0;
  Point x{};
  int label = 0;
  Point v{};
};

struct JumpEvent {
  double t = 0.0;
  Point x{};
  int from = 0;
  int to = 0;
};

struct TrajectoryStats {
  std::uint64_t evaluations = 0;
  std::uint64_t degenerate_hits = 0;
  std::uint64_t minimality_violations = 0;
  std::uint64_t halvings = 0;
  double max_speed_excess = 0.0;
  void merge(const TrajectoryStats& o);
};

struct PdmpOptions {
  double step = 0.0;            // base step; 0 means the record frame stride
  double output_stride = 0.0;   // 0 means every base step
  double max_rate_step = 0.1;   // substeps keep rate * h below this
  double max_displacement = 0;  // 0 means one grid spacing
  bool keep_samples = true;
  std::vector<double> checkpoints;  // states captured here (on the step lattice)
};

struct Trajectory {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::vector<TrajectorySample> samples;
  std::vector<JumpEvent> events;
  std::vector<ParticleState> checkpoint_states;
  std::uint64_t jump_count = 0;
  TrajectoryStats stats;
};

// One substep-controlled advance of duration `dt` with jump sampling; returns
// the state at t + dt. Jump events are appended to `events`.
class PdmpIntegrator {
 public:
  PdmpIntegrator(const GuidanceModel& model, const PdmpOptions& options);

  ParticleState integrate_step(const ParticleState& state, double dt, RandomStream& rng,
                               std::vector<JumpEvent>* events, TrajectoryStats& stats);
  ParticleState integrate_to(const ParticleState& state, double t_stop, RandomStream& rng,
                             std::vector<JumpEvent>* events, TrajectoryStats& stats);

  // Velocity at the state, with the degenerate hold rule applied.
  Point velocity(const ParticleState& state, TrajectoryStats& stats);

 private:
  GuidanceEval eval(const Point& x, double t, int label, TrajectoryStats& stats);
  const GuidanceEval& start_eval(const ParticleState& state, TrajectoryStats& stats);
  Point velocity_of(const GuidanceEval& e) const { return e.degenerate ? last_v_ : e.v; }

  const GuidanceModel& model_;
  PdmpOptions options_;
  double max_disp_;
  double min_substep_;
  Point last_v_{};
  bool have_cache_ = false;
  ParticleState cache_state_{};
  GuidanceEval cache_{};
};

Trajectory sample_trajectory(const GuidanceModel& model, const ParticleState& init, double t_final,
                             std::uint64_t seed, std::uint64_t index, const PdmpOptions& options);

}  // namespace zigzag
