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

#include "zigzag/pdmp.hpp"

#include <algorithm>
#include <cmath>

#include "zigzag/error.hpp"

namespace zigzag {

void TrajectoryStats::merge(const TrajectoryStats& o) {
  evaluations += o.evaluations;
  degenerate_hits += o.degenerate_hits;
  minimality_violations += o.minimality_violations;
  halvings += o.halvings;
  max_speed_excess = std::max(max_speed_excess, o.max_speed_excess);
}

PdmpIntegrator::PdmpIntegrator(const GuidanceModel& model, const PdmpOptions& options)
    : model_(model), options_(options) {
  max_disp_ = options.max_displacement > 0 ? options.max_displacement : model.grid().min_spacing();
  // Halving stops once a substep resolves the capped rate.
  min_substep_ = 0.5 * options.max_rate_step / model.rate_cap();
}

GuidanceEval PdmpIntegrator::eval(const Point& x, double t, int label, TrajectoryStats& stats) {
  GuidanceEval e = model_.evaluate(x.data(), t, label);
  ++stats.evaluations;
  if (e.degenerate) ++stats.degenerate_hits;
  if (!e.minimal) ++stats.minimality_violations;
  if (!e.degenerate) stats.max_speed_excess = std::max(stats.max_speed_excess, e.speed_excess);
  return e;
}

const GuidanceEval& PdmpIntegrator::start_eval(const ParticleState& s, TrajectoryStats& stats) {
  if (!have_cache_ || cache_state_.t != s.t || cache_state_.label != s.label || cache_state_.x != s.x) {
    cache_ = eval(s.x, s.t, s.label, stats);
    cache_state_ = s;
    have_cache_ = true;
    if (!cache_.degenerate) last_v_ = cache_.v;
  }
  return cache_;
}

Point PdmpIntegrator::velocity(const ParticleState& state, TrajectoryStats& stats) {
  return velocity_of(start_eval(state, stats));
}

ParticleState PdmpIntegrator::integrate_step(const ParticleState& state, double dt, RandomStream& rng,
                                             std::vector<JumpEvent>* events, TrajectoryStats& stats) {
  return integrate_to(state, state.t + dt, rng, events, stats);
}

ParticleState PdmpIntegrator::integrate_to(const ParticleState& state, double t_stop, RandomStream& rng,
                                           std::vector<JumpEvent>* events, TrajectoryStats& stats) {
  const Grid& g = model_.grid();
  const int d = g.dim;
  ParticleState s = state;
  const double dt = t_stop - state.t;
  double h_try = dt;

  while (s.t < t_stop) {
    const GuidanceEval e0 = start_eval(s, stats);
    const Point k1 = velocity_of(e0);
    double h = std::min(h_try, t_stop - s.t);
    if (t_stop - s.t - h < 1e-12 * dt) h = t_stop - s.t;

    Point x1{};
    GuidanceEval e1;
    for (;;) {
      auto shifted = [&](const Point& base, const Point& k, double a) {
        Point p = base;
        for (int i = 0; i < d; ++i) p[i] += a * k[i];
        return p;
      };
      const Point k2 = velocity_of(eval(shifted(s.x, k1, 0.5 * h), s.t + 0.5 * h, s.label, stats));
      const Point k3 = velocity_of(eval(shifted(s.x, k2, 0.5 * h), s.t + 0.5 * h, s.label, stats));
      const Point k4 = velocity_of(eval(shifted(s.x, k3, h), s.t + h, s.label, stats));
      double vmax = 0.0;
      for (const Point* k : {&k1, &k2, &k3, &k4}) {
        double n2 = 0.0;
        for (int i = 0; i < d; ++i) n2 += (*k)[i] * (*k)[i];
        vmax = std::max(vmax, std::sqrt(n2));
      }
      for (int i = 0; i < d; ++i) x1[i] = g.wrap(i, s.x[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]));
      e1 = eval(x1, s.t + h, s.label, stats);
      const double rmax = std::max(e0.total_rate(), e1.total_rate());
      const bool too_fast = vmax * h > max_disp_;
      const bool too_likely = rmax * h > options_.max_rate_step;
      if ((too_fast || too_likely) && h > min_substep_) {
        h *= 0.5;
        ++stats.halvings;
        continue;
      }
      break;
    }

    const double r0 = e0.total_rate(), r1 = e1.total_rate();
    const double t1 = (t_stop - (s.t + h) < 1e-12 * dt) ? t_stop : s.t + h;
    ParticleState next{x1, s.label, t1};
    // Committed end-point evaluation becomes the next start evaluation.
    cache_ = e1;
    cache_state_ = next;
    have_cache_ = true;
    if (!e1.degenerate) last_v_ = e1.v;

    const double p = -std::expm1(-0.5 * (r0 + r1) * h);
    if (p > 0.0 && rng.uniform() < p) {
      // The jump is placed at the substep end; channels compete by rate.
      const GuidanceEval& src = r1 > 0.0 ? e1 : e0;
      int target = src.jump[0].target;
      if (src.channels > 1) {
        const double u = rng.uniform() * src.total_rate();
        target = u < src.jump[0].rate ? src.jump[0].target : src.jump[1].target;
      }
      if (events) events->push_back(JumpEvent{t1, x1, s.label, target});
      next.label = target;
      start_eval(next, stats);
    }
    s = next;
    h_try = std::min(2.0 * h, dt);
  }
  return s;
}

Trajectory sample_trajectory(const GuidanceModel& model, const ParticleState& init, double t_final,
                             std::uint64_t seed, std::uint64_t index, const PdmpOptions& options) {
  require(init.t >= model.t_begin() - 1e-12 && t_final <= model.t_end() + 1e-9 && init.t < t_final,
          ErrorKind::kInvalid, "t_final", "trajectory window outside the record window");
  const double span = t_final - init.t;
  double H = options.step > 0 ? options.step : model.frame_stride();
  const long nsteps = std::max(1L, std::lround(std::ceil(span / H - 1e-9)));
  H = span / static_cast<double>(nsteps);
  const long out_every =
      options.output_stride > 0 ? std::max(1L, std::lround(options.output_stride / H)) : 1L;
  std::vector<long> cp_steps;
  for (double c : options.checkpoints) {
    const long k = std::lround((c - init.t) / H);
    require(k >= 0 && k <= nsteps && std::abs(init.t + k * H - c) < 1e-6 * std::max(1.0, std::abs(c)),
            ErrorKind::kInvalid, "checkpoints", "checkpoint not on the trajectory step lattice");
    cp_steps.push_back(k);
  }

  Trajectory tr;
  tr.index = index;
  tr.seed = seed;
  tr.checkpoint_states.resize(cp_steps.size());
  RandomStream rng(seed, index, RngDomain::kJump);
  PdmpIntegrator integ(model, options);
  ParticleState s = init;
  std::vector<JumpEvent>* ev = options.keep_samples ? &tr.events : nullptr;
  std::vector<JumpEvent> scratch;
  for (long k = 0; k <= nsteps; ++k) {
    if (options.keep_samples && (k % out_every == 0 || k == nsteps)) {
      const Point v = integ.velocity(s, tr.stats);
      tr.samples.push_back(TrajectorySample{s.t, s.x, s.label, v});
    }
    for (std::size_t c = 0; c < cp_steps.size(); ++c)
      if (cp_steps[c] == k) tr.checkpoint_states[c] = s;
    if (k == nsteps) break;
    scratch.clear();
    s = integ.integrate_to(s, init.t + static_cast<double>(k + 1) * H, rng, ev ? ev : &scratch, tr.stats);
    tr.jump_count += ev ? 0 : scratch.size();
  }
  if (ev) tr.jump_count = tr.events.size();
  return tr;
}

}  // namespace zigzag
