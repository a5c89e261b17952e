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

#include "zigzag/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "zigzag/error.hpp"
#include "zigzag/rng.hpp"

namespace zigzag {

namespace {

const std::map<std::string, const char*>& reference_configs() {
  static const std::map<std::string, const char*> configs = {
      {"superposed_gaussian", R"({
        "name": "superposed_gaussian", "model": "dirac1d",
        "grid": {"dim": 1, "points": 512, "length": 40},
        "mass": 1,
        "initial": {"preset": "packets", "packets": [
          {"center": -2, "width": 1, "momentum": 1, "amp_R": 1, "amp_L": 0.5},
          {"center": 2, "width": 1.2, "momentum": -0.5, "amp_R": [0, 0.6], "amp_L": 0.8}]},
        "t_final": 5, "dt": 0.01, "checkpoints": [0, 1, 3, 5]})"},
      {"entangled_pair", R"({
        "name": "entangled_pair", "model": "manybody",
        "grid": {"dim": 1, "points": 64, "length": 16},
        "mass": 1,
        "initial": {"preset": "entangled", "center1": -1.5, "center2": 1.5, "width": 1,
                    "momentum1": 0.5, "momentum2": -0.5},
        "t_final": 3, "dt": 0.025, "checkpoints": [0, 1, 3]})"},
      {"pauli_packet", R"({
        "name": "pauli_packet", "model": "pauli_B",
        "grid": {"dim": 1, "points": 256, "length": 40},
        "mass": 4, "charge": 1,
        "initial": {"preset": "packets", "packets": [
          {"center": [0, 0, 0], "width": 1, "momentum": [0, 0, 1], "spin": [0.921060994, 0.389418342]}]},
        "t_final": 5, "dt": 0.01, "checkpoints": [0, 1, 3, 5]})"},
      {"spin_split_x", R"({
        "name": "spin_split_x", "model": "spin_split",
        "grid": {"dim": 1, "points": 256, "length": 40},
        "mass": 1, "charge": 1,
        "potential": {"preset": "uniform_b", "b": [1, 0, 0]},
        "initial": {"preset": "packets", "packets": [
          {"center": [0, 0, -2], "width": 1.5, "momentum": [0, 0, 0.5], "spin": [1, 0]},
          {"center": [0, 0, 2], "width": 1, "momentum": [0, 0, -0.7], "spin": [0.6, [0, 0.8]]}]},
        "t_final": 3, "dt": 0.01, "checkpoints": [0, 1, 2, 3]})"},
      {"reim_bump", R"({
        "name": "reim_bump", "model": "reim_split",
        "grid": {"dim": 1, "points": 256, "length": 40},
        "mass": 1, "charge": 1,
        "potential": {"preset": "gaussian_bump", "height": 0.3, "width": 1},
        "initial": {"preset": "packets", "packets": [
          {"center": [0, 0, -4], "width": 1, "momentum": [0, 0, 1]},
          {"center": [0, 0, 4], "width": 1, "momentum": [0, 0, -0.8]}]},
        "t_final": 3, "dt": 0.01, "checkpoints": [0, 1, 2, 3]})"},
      {"rotation_y", R"({
        "name": "rotation_y", "model": "spin_split",
        "grid": {"dim": 2, "points": 64, "length": 16},
        "mass": 1, "charge": 1,
        "potential": {"preset": "uniform_b", "b": [0, 1, 0]},
        "initial": {"preset": "packets", "packets": [
          {"center": [0, -1, -0.5], "width": 1, "momentum": [0, 0.6, 0.4], "spin": [1, 0]},
          {"center": [0, 1, 0.5], "width": 1.2, "momentum": [0, -0.5, 0.2], "spin": [0.6, [0, 0.8]]}]},
        "t_final": 3, "dt": 0.02, "checkpoints": [0, 3]})"},
      {"rotation_z", R"({
        "name": "rotation_z", "model": "spin_split",
        "grid": {"dim": 2, "points": 64, "length": 16},
        "mass": 1, "charge": 1,
        "potential": {"preset": "uniform_b", "b": [0, 0, 1]},
        "initial": {"preset": "packets", "rotate_quarter_x": true, "packets": [
          {"center": [0, -1, -0.5], "width": 1, "momentum": [0, 0.6, 0.4], "spin": [1, 0]},
          {"center": [0, 1, 0.5], "width": 1.2, "momentum": [0, -0.5, 0.2], "spin": [0.6, [0, 0.8]]}]},
        "t_final": 3, "dt": 0.02, "checkpoints": [0, 3]})"},
  };
  return configs;
}

EnsembleOptions options_for(const Scenario& s, std::size_t n, std::uint64_t seed, int workers,
                            std::vector<double> checkpoints = {}) {
  EnsembleOptions o;
  o.n = n;
  o.seed = seed;
  o.checkpoints = checkpoints.empty() ? s.checkpoints : std::move(checkpoints);
  o.workers = workers;
  o.pdmp.max_rate_step = s.max_rate_step;
  return o;
}

double distance(const Grid& g, const Point& a, const Point& b) {
  double d2 = 0.0;
  for (int ax = 0; ax < g.dim; ++ax) {
    const double d = g.wrap(ax, a[ax] - b[ax]);
    d2 += d * d;
  }
  return std::sqrt(d2);
}

double max_distance(const Grid& g, const std::vector<ParticleState>& a, const std::vector<ParticleState>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, distance(g, a[i].x, b[i].x));
  return m;
}

double fraction_beyond(const Grid& g, const std::vector<ParticleState>& a, const std::vector<ParticleState>& b,
                       double threshold) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) k += distance(g, a[i].x, b[i].x) > threshold;
  return a.empty() ? 0.0 : static_cast<double>(k) / a.size();
}

double histogram_tv(const Grid& g, const std::vector<ParticleState>& a, const std::vector<ParticleState>& b,
                    int bins) {
  std::vector<Point> pa, pb;
  for (const auto& s : a) pa.push_back(s.x);
  for (const auto& s : b) pb.push_back(s.x);
  return total_variation(histogram(g, pa, bins), histogram(g, pb, bins));
}

RealField summed(const std::vector<RealField>& d) {
  RealField t(d.at(0).size(), 0.0);
  for (const auto& f : d)
    for (std::size_t q = 0; q < t.size(); ++q) t[q] += f[q];
  return t;
}

// Final states of a deterministic model run at steps h and h/2.
double step_halving_deviation(const GuidanceModel& model, const std::vector<ParticleState>& init, double t_final,
                              const EnsembleOptions& o) {
  EnsembleOptions half = o;
  half.pdmp.step = 0.5 * model.frame_stride();
  const auto a = run_ensemble(model, init, t_final, o);
  const auto b = run_ensemble(model, init, t_final, half);
  return max_distance(model.grid(), a.states.back(), b.states.back());
}

}  // namespace

Scenario reference_scenario(const std::string& name) {
  const auto& c = reference_configs();
  const auto it = c.find(name);
  require(it != c.end(), ErrorKind::kInvalid, "scenario", "unknown reference scenario '" + name + "'");
  return parse_scenario(it->second);
}

EnsembleRun reference_ensemble(const PreparedRun& run, const Scenario& s, std::size_t n, std::uint64_t seed,
                               int workers) {
  EnsembleRun r = equivariance_test(*run.model, options_for(s, n, seed, workers));
  r.report.scenario = s.name;
  return r;
}

MasterComparison nonequilibrium_master_check(const WaveRecord& rec, const GuidanceModel& model,
                                             const std::vector<double>& checkpoints, std::size_t n,
                                             std::uint64_t seed, int workers) {
  require(rec.kind == "dirac1d", ErrorKind::kInvalid, "record", "the chiral master equation needs a dirac1d record");
  const Grid& g = rec.grid;
  const RealField rho = summed(model.label_densities(rec.t0));
  const RealField zero(g.cells(), 0.0);
  std::vector<int> frames;
  for (double t : checkpoints) frames.push_back(rec.frame_at(t));
  const auto pde = master_equation_dirac1d(rec, zero, rho, frames);
  const auto init = sample_equilibrium(g, {zero, rho}, n, seed, rec.t0);
  EnsembleOptions o;
  o.n = n;
  o.seed = seed;
  o.checkpoints = checkpoints;
  o.workers = workers;
  const auto run = run_ensemble(model, init, checkpoints.back(), o,
                                [&pde](int k, double) { return pde[static_cast<std::size_t>(k)]; });
  MasterComparison mc;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const auto& st = run.report.checkpoints[k];
    mc.t.push_back(checkpoints[k]);
    mc.tv.push_back(st.tv_total);
    mc.tv_noise.push_back(st.tv_noise);
    mc.fraction_R_pde.push_back(st.label_target[0]);
    mc.fraction_R_ensemble.push_back(st.label_fraction[0]);
  }
  return mc;
}

PairedComparison gauge_experiment(std::size_t n, std::uint64_t seed, int workers) {
  const Scenario s = reference_scenario("reim_bump");
  const PreparedRun run = prepare(s);
  const GaugeSpec gauge{0.7, 0.3};
  const auto gauged = build_reim_split_model(*run.record, gauge);
  const EnsembleOptions o = options_for(s, n, seed, workers, {s.t_final});
  const auto a = equivariance_test(*run.model, o);
  const auto b = equivariance_test(*gauged, o);
  PairedComparison pc;
  const Grid& g = run.model->grid();
  pc.tv_a = a.report.checkpoints.back().tv_total;
  pc.tv_b = b.report.checkpoints.back().tv_total;
  pc.noise = a.report.checkpoints.back().tv_noise;
  pc.tv_ab = histogram_tv(g, a.states.back(), b.states.back(), a.report.bins);
  pc.max_deviation = max_distance(g, a.states.back(), b.states.back());
  pc.jump_mean_a = a.report.jump_mean;
  pc.jump_mean_b = b.report.jump_mean;

  const std::size_t nc = std::min<std::size_t>(n, 2000);
  const auto bohm = build_scalar_bohm_model(*run.record);
  const auto bohm_gauged = build_scalar_bohm_model(*run.record, gauge);
  const EnsembleOptions oc = options_for(s, nc, seed, workers, {s.t_final});
  const auto init = sample_equilibrium(g, bohm->label_densities(0.0), nc, seed, 0.0);
  pc.integrator_tolerance = step_halving_deviation(*bohm, init, s.t_final, oc);
  pc.control_deviation = max_distance(g, run_ensemble(*bohm, init, s.t_final, oc).states.back(),
                                      run_ensemble(*bohm_gauged, init, s.t_final, oc).states.back());
  pc.fraction_deviating = fraction_beyond(g, a.states.back(), b.states.back(), 10.0 * pc.integrator_tolerance);
  return pc;
}

PairedComparison rotation_experiment(std::size_t n, std::uint64_t seed, int workers) {
  const Scenario sa = reference_scenario("rotation_y"), sb = reference_scenario("rotation_z");
  const PreparedRun ra = prepare(sa), rb = prepare(sb);
  const Grid& g = ra.model->grid();
  const double T = sa.t_final;
  const auto init_a = sample_equilibrium(g, ra.model->label_densities(0.0), n, seed, 0.0);
  const EquilibriumSampler sampler_b(g, rb.model->label_densities(0.0));
  std::vector<ParticleState> init_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto yz = rotate_point_quarter_x({init_a[i].x[0], init_a[i].x[1]});
    init_b[i].x = {g.wrap(0, yz[0]), g.wrap(1, yz[1]), 0.0};
    RandomStream lab(seed, i, RngDomain::kLabel);
    init_b[i].label = sampler_b.draw_label(init_b[i].x, lab);
    init_b[i].t = 0.0;
  }
  const EnsembleOptions o = options_for(sa, n, seed, workers, {T});
  const auto a = run_ensemble(*ra.model, init_a, T, o);
  const auto b = run_ensemble(*rb.model, init_b, T, o);
  // Map the rotated run back: R^-1 (y, z) = (z, -y).
  std::vector<ParticleState> back = b.states.back();
  for (auto& st : back) {
    const double y = st.x[0], z = st.x[1];
    st.x = {g.wrap(0, z), g.wrap(1, -y), 0.0};
    st.label = 0;
  }
  const RealField target = summed(ra.model->label_densities(T));
  PairedComparison pc;
  pc.tv_a = a.report.checkpoints.back().tv_total;
  pc.tv_b = compare_states(g, {target}, back, a.report.bins, T).tv_total;
  pc.noise = a.report.checkpoints.back().tv_noise;
  pc.tv_ab = histogram_tv(g, a.states.back(), back, a.report.bins);
  pc.max_deviation = max_distance(g, a.states.back(), back);
  pc.jump_mean_a = a.report.jump_mean;
  pc.jump_mean_b = b.report.jump_mean;
  const std::size_t nc = std::min<std::size_t>(n, 2000);
  const std::vector<ParticleState> init_c(init_b.begin(), init_b.begin() + static_cast<long>(nc));
  pc.integrator_tolerance = step_halving_deviation(*rb.model, init_c, T, options_for(sb, nc, seed, workers, {T}));
  pc.control_deviation = -1.0;
  pc.fraction_deviating = fraction_beyond(g, a.states.back(), back, 10.0 * pc.integrator_tolerance);
  return pc;
}

}  // namespace zigzag
