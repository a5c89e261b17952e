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

#include "zigzag/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "zigzag/error.hpp"
#include "zigzag/experiments.hpp"
#include "zigzag/models.hpp"
#include "zigzag/rng.hpp"

namespace zigzag {

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

constexpr std::uint64_t kSeed = 2026;

class Checks {
 public:
  void below(const std::string& name, double measured, double threshold) { add(name, measured, threshold, "<"); }
  void at_most(const std::string& name, double measured, double threshold) { add(name, measured, threshold, "<="); }
  void above(const std::string& name, double measured, double threshold) { add(name, measured, threshold, ">"); }
  void at_least(const std::string& name, double measured, double threshold) { add(name, measured, threshold, ">="); }
  void equal(const std::string& name, double measured, double expected) { add(name, measured, expected, "=="); }
  void within(const std::string& name, double measured, double lo, double hi) {
    add(name + "_min", measured, lo, ">=");
    add(name + "_max", measured, hi, "<=");
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  void add(const std::string& name, double m, double t, const char* rel) {
    const std::string r = rel;
    bool ok = false;
    if (r == "<") ok = m < t;
    if (r == "<=") ok = m <= t;
    if (r == ">") ok = m > t;
    if (r == ">=") ok = m >= t;
    if (r == "==") ok = m == t;
    out_.push_back({name, ok, m, t, r});
  }
  std::vector<CheckResult> out_;
};

std::string fmt_t(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

class Normal {
 public:
  explicit Normal(std::uint64_t stream) : rng_(kSeed, stream, RngDomain::kAux) {}
  double operator()() {
    const double u = rng_.uniform(), v = rng_.uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }
  cplx complex() { return {(*this)(), (*this)()}; }
  double uniform(double a, double b) { return a + (b - a) * rng_.uniform(); }

 private:
  RandomStream rng_;
};

// Random trigonometric polynomial with mode numbers |j| <= band per axis.
Field random_band_limited(const Grid& g, int band, Normal& gen) {
  Field f(g.cells(), 0.0);
  const int nz = g.dim > 1 ? band : 0;
  for (int j0 = -band; j0 <= band; ++j0)
    for (int j1 = -nz; j1 <= nz; ++j1) {
      const cplx c = gen.complex() / std::sqrt(1.0 + j0 * j0 + j1 * j1);
      const int j[2] = {j0, j1};
      for (std::size_t q = 0; q < g.cells(); ++q) {
        std::size_t rem = q;
        double phase = 0.0;
        for (int a = g.dim - 1; a >= 0; --a) {
          const int i = static_cast<int>(rem % g.points[a]);
          rem /= g.points[a];
          phase += 2 * std::numbers::pi * j[a] * g.coord(a, i) / g.extent[a];
        }
        f[q] += c * std::exp(cplx(0.0, phase));
      }
    }
  return f;
}

PauliField pauli_field(const Grid& g, Spinor2Field phi, double m, double e, const PotentialSpec& spec = {}) {
  PauliField f;
  f.grid = g;
  f.phi = std::move(phi);
  f.mass = m;
  f.charge = e;
  f.pot = make_potentials(g, spec);
  return f;
}

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

// TV checks of an ensemble against a threshold at every checkpoint after t = 0.
void tv_checks(Checks& c, const std::string& prefix, const EnsembleReport& r, double total, double label) {
  for (const auto& cp : r.checkpoints) {
    if (cp.t == 0.0) continue;
    c.below(prefix + "_tv_total_t" + fmt_t(cp.t), cp.tv_total, total);
    if (label > 0)
      for (std::size_t k = 0; k < cp.tv_label.size(); ++k)
        c.below(prefix + "_tv_" + r.labels[k] + "_t" + fmt_t(cp.t), cp.tv_label[k], label);
  }
}

void trajectory_checks(Checks& c, const std::string& prefix, const EnsembleReport& r, bool luminal) {
  if (luminal)
    c.below(prefix + "_trajectory_luminality", r.stats.max_speed_excess, 1e-12);
  else
    c.at_most(prefix + "_trajectory_speed_excess", r.stats.max_speed_excess, 1e-12);
  c.equal(prefix + "_minimality_violations", static_cast<double>(r.stats.minimality_violations), 0.0);
}

std::vector<CheckResult> algebra() {
  Checks c;
  Normal gen(1);
  double lum = 0.0, bohm = -1.0, convex = 0.0, round_trip = 0.0, balance = 0.0;
  std::uint64_t nonminimal = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const Weyl R(gen.complex(), gen.complex()), L(gen.complex(), gen.complex());
    const double m = gen.uniform(0.1, 3.0);
    const auto vr = velocity_field(R, Chirality::R), vl = velocity_field(L, Chirality::L);
    lum = std::max({lum, std::abs(vr.v.norm() - 1.0), std::abs(vl.v.norm() - 1.0)});
    const auto rates = jump_rates(R, L, m);
    if (rates.t_LR * rates.t_RL != 0.0) ++nonminimal;
    const auto cur = chiral_currents(R, L);
    const double F = coupling_F(R, L, m);
    balance = std::max(balance, std::abs(cur.rho_L * rates.t_LR - cur.rho_R * rates.t_RL - F) / (1.0 + std::abs(F)));
    const Dirac psi = assemble(R, L);
    const auto vd = bohm_velocity(psi);
    bohm = std::max(bohm, vd.v.norm() - 1.0);
    const Vec3 mix = (cur.rho_R * vr.v + cur.rho_L * vl.v) / (cur.rho_R + cur.rho_L);
    convex = std::max(convex, (vd.v - mix).norm());
    const auto back = chiral_decompose(psi);
    round_trip = std::max(round_trip, ((back.right - R).norm() + (back.left - L).norm()) / psi.norm());
  }
  c.below("chiral_velocity_luminality", lum, 1e-12);
  c.equal("rate_minimality_violations", static_cast<double>(nonminimal), 0.0);
  c.below("rate_balance_equals_coupling", balance, 1e-12);
  c.at_most("bohm_speed_excess", bohm, 1e-12);
  c.below("bohm_convex_combination", convex, 1e-12);
  c.below("decompose_assemble_round_trip", round_trip, 1e-14);
  return c.take();
}

std::vector<CheckResult> dynamics() {
  Checks c;
  const double m = 1.25, L = 10.0;  // T = 10 / m = 8 lands on the frame lattice
  const cplx a = 1.0 / std::sqrt(2.0);
  const Grid line = Grid::line(16, L);
  {
    const auto rec = evolve_1d(chiral_rest_superposition(line, a, a), m, 10.0 / m, 1e-3);
    double rho_err = 0.0, F_err = 0.0, rate_err = 0.0;
    std::uint64_t both = 0;
    for (int k = 0; k < rec.frames; ++k) {
      const double t = rec.time(k);
      auto p = record_chiral_pair(rec, k, 5);
      p.right *= std::sqrt(L);  // unit density instead of box normalization
      p.left *= std::sqrt(L);
      const auto cur = chiral_currents(p.right, p.left);
      const double s = std::sin(2 * m * t), cs = std::cos(m * t), sn = std::sin(m * t);
      rho_err = std::max(rho_err, std::abs(cur.rho_R - cs * cs));
      F_err = std::max(F_err, std::abs(coupling_F(p.right, p.left, m) + m * s));
      const auto r = jump_rates(p.right, p.left, m);
      if (r.t_LR * r.t_RL != 0.0) ++both;
      if (cs * cs > 1e-3) rate_err = std::max(rate_err, std::abs(r.t_RL - std::max(0.0, m * s) / (cs * cs)));
      if (sn * sn > 1e-3) rate_err = std::max(rate_err, std::abs(r.t_LR - std::max(0.0, -m * s) / (sn * sn)));
    }
    c.below("rest_superposition_rho_R", rho_err, 1e-10);
    c.below("rest_superposition_coupling", F_err, 1e-10);
    c.below("rest_superposition_rates", rate_err, 1e-10);
    c.equal("rest_superposition_rate_overlap", static_cast<double>(both), 0.0);
  }
  {
    const double T = 10.0 / m;
    auto rec = std::make_shared<WaveRecord>(evolve_1d(chiral_rest_superposition(line, a, a), m, T, 0.01));
    const DiracZigzagModel model(rec);
    EnsembleOptions o;
    o.n = 10000;
    o.seed = kSeed;
    o.checkpoints = {T};
    const auto run = equivariance_test(model, o);
    // Expected jumps per trajectory: time integral of |F| for unit density (midpoint rule).
    double expected = 0.0;
    const int q = 200000;
    for (int i = 0; i < q; ++i) expected += std::abs(m * std::sin(2 * m * (i + 0.5) * T / q)) * T / q;
    const double se = std::sqrt(run.report.jump_var / o.n);
    c.below("rest_superposition_jump_count_z", std::abs(run.report.jump_mean - expected) / se, 3.0);
  }
  {
    const Grid g = Grid::line(512, 40.0);
    const auto init = chiral_packets(g, {{-2, 1, 1, 1.0, 0.5}, {2, 1.2, -0.5, cplx(0, 0.6), 0.8}});
    double prev = 0.0;
    for (double dt : {1e-3, 5e-4}) {
      const auto rec = evolve_1d(init, 1.0, 1.0, dt);
      const auto r = divergence_residual(rec, 1.0);
      const double worst = std::max(r.right, r.left);
      c.below("divergence_residual_dt" + fmt_t(dt), worst, 1e-6);
      if (prev > 0) c.within("divergence_residual_halving_ratio", prev / worst, 3.0, 5.0);
      prev = worst;
      if (dt == 1e-3) {
        double drift = 0.0;
        for (int k = 0; k < rec.frames; k += 50) drift = std::max(drift, std::abs(record_norm(rec, k) - 1.0));
        c.below("norm_conservation", drift, 1e-12);
      }
    }
  }
  return c.take();
}

std::vector<CheckResult> equivariance(int workers) {
  Checks c;
  const Scenario s = reference_scenario("superposed_gaussian");
  const PreparedRun run = prepare(s);
  const auto eq = reference_ensemble(run, s, 20000, kSeed, workers);
  tv_checks(c, "dirac1d", eq.report, 0.05, 0.07);
  trajectory_checks(c, "dirac1d", eq.report, true);
  {
    // Same bins at both sizes so the ratio isolates the sampling noise.
    EnsembleOptions o;
    o.seed = kSeed;
    o.workers = workers;
    o.checkpoints = s.checkpoints;
    o.bins = eq.report.bins;
    // Mean TV over four seeds at n against one run at 4n.
    double small = 0.0, large = 0.0;
    for (const auto& cp : eq.report.checkpoints) small += cp.t > 0 ? cp.tv_total : 0.0;
    o.n = 20000;
    for (std::uint64_t k = 1; k < 4; ++k) {
      o.seed = kSeed + k;
      for (const auto& cp : equivariance_test(*run.model, o).report.checkpoints) small += cp.t > 0 ? cp.tv_total : 0.0;
    }
    small /= 4.0;
    o.seed = kSeed + 100;
    o.n = 80000;
    const auto big = equivariance_test(*run.model, o);
    for (const auto& cp : big.report.checkpoints) large += cp.t > 0 ? cp.tv_total : 0.0;
    c.within("dirac1d_tv_ratio_n_to_4n", small / large, 1.4, 2.8);
  }
  {
    const auto mc = nonequilibrium_master_check(*run.record, *run.model, s.checkpoints, 20000, kSeed, workers);
    for (std::size_t k = 0; k < mc.t.size(); ++k) {
      if (mc.t[k] == 0.0) continue;
      const double eq_tv = eq.report.checkpoints[k].tv_total;
      c.below("master_equation_tv_over_equilibrium_t" + fmt_t(mc.t[k]), mc.tv[k] / eq_tv, 3.0);
      c.below("master_equation_fraction_R_t" + fmt_t(mc.t[k]),
              std::abs(mc.fraction_R_pde[k] - mc.fraction_R_ensemble[k]), 0.02);
    }
  }
  return c.take();
}

std::vector<CheckResult> manybody(int workers) {
  Checks c;
  Normal gen(2);
  double excess = -1.0, singlet = 0.0;
  for (int i = 0; i < 100000; ++i) {
    Block2P b;
    for (auto& v : b) v = gen.complex();
    for (int s = 0; s < kSectors; ++s) {
      const auto v = velocities_2p(b, s);
      excess = std::max({excess, std::abs(v.v1) - 1.0, std::abs(v.v2) - 1.0});
    }
    const int s = i % kSectors;
    const cplx amp = gen.complex();
    Block2P sb{};
    sb[4 * s + 1] = amp;
    sb[4 * s + 2] = -amp;
    const auto v = velocities_2p(sb, s);
    singlet = std::max({singlet, std::abs(v.v1), std::abs(v.v2)});
  }
  c.at_most("random_block_speed_excess", excess, 1e-12);
  c.below("singlet_velocity", singlet, 1e-10);
  {
    const Grid line = Grid::line(32, 10.0);
    EntangledSpec spec;
    auto centre = [&](const SectorField2P& f) {
      Block2P b;
      for (int k = 0; k < kComponents2P; ++k) b[k] = f.phi[k][16 * 32 + 16];
      return b;
    };
    const int RR = sector_of(0, 0), LR = sector_of(1, 0);
    const auto b = centre(entangled_packets(line, spec));
    c.above("flip_moves_partner", std::abs(velocities_2p(b, RR).v2 - velocities_2p(b, LR).v2), 0.0);
    spec.theta = {0, 0, 0, 0};
    const auto p = centre(entangled_packets(line, spec));
    c.equal("product_state_partner_unchanged", std::abs(velocities_2p(p, RR).v2 - velocities_2p(p, LR).v2), 0.0);
  }
  {
    // The balance residual differentiates in time between frames; it needs a fine step.
    const auto rec = evolve_2p(entangled_packets(Grid::line(32, 16.0), EntangledSpec{}), 1.0, 0.05, 5e-4);
    c.below("sector_balance_residual", sector_balance_residual(rec), 1e-6);
  }
  const Scenario s = reference_scenario("entangled_pair");
  const PreparedRun run = prepare(s);
  double field_excess = -1.0;
  for (int k = 0; k < run.record->frames; ++k) field_excess = std::max(field_excess, max_speed_2p(*run.record, k) - 1.0);
  c.at_most("record_speed_excess", field_excess, 1e-12);
  const auto eq = reference_ensemble(run, s, 20000, kSeed, workers);
  tv_checks(c, "two_particle", eq.report, 0.07, 0.0);
  trajectory_checks(c, "two_particle", eq.report, false);
  return c.take();
}

std::vector<CheckResult> nonrel(int workers) {
  Checks c;
  {
    Normal gen(3);
    const char* presets[] = {"none", "periodic_a", "gaussian_bump"};
    std::array<double, IdentityResiduals::kCount> worst{};
    double f1 = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const bool two_d = n % 10 == 9;
      const Grid g = two_d ? Grid::square(16, 12.0) : Grid::line(32, 12.0);
      PotentialSpec spec;
      spec.preset = presets[n % 3];
      spec.amplitude = gen.uniform(-1, 1);
      spec.height = gen.uniform(-1, 1);
      spec.width = 2.0;
      const int band = two_d ? 2 : 4;
      Spinor2Field phi{random_band_limited(g, band, gen), random_band_limited(g, band, gen)};
      const auto f = pauli_field(g, std::move(phi), gen.uniform(0.5, 3.0), gen.uniform(-2, 2), spec);
      const auto r = identity_residuals(f);
      for (int k : {0, 3, 4, 5}) worst[k] = std::max(worst[k], r.max[k]);
      // The continuity identities are exact for band-limited data only when
      // the potentials are band-limited too.
      if (spec.preset != "gaussian_bump")
        for (int k : {1, 2}) worst[k] = std::max(worst[k], r.max[k]);
      const auto ex = expand_currents(f);
      for (std::size_t q = 0; q < g.cells(); ++q) f1 = std::max(f1, std::abs(ex.F[1][q] - ex.F1_divergence[q]));
    }
    for (int k = 0; k < IdentityResiduals::kCount; ++k)
      c.below(std::string("random_fields_") + IdentityResiduals::names[k], worst[k], 1e-10);
    c.below("random_fields_spin_divergence_form", f1, 1e-10);
  }
  {
    std::vector<double> res;
    for (int N : {64, 128, 256}) {
      const Grid g = Grid::line(N, 30.0);
      PotentialSpec spec;
      spec.preset = "gaussian_bump";
      spec.height = 0.4;
      spec.width = 1.5;
      PauliGaussian pk;
      pk.width = 0.7;
      pk.momentum = Vec3(0, 0, 1.0);
      pk.spin = Weyl(1.0, cplx(0.3, 0.5));
      const auto f = pauli_field(g, pauli_packets(g, {pk}), 1.0, 1.0, spec);
      const auto rec = pauli_evolve(f, 1.0, 0.01);
      const auto r = identity_residuals(pauli_frame(rec, f.pot, rec.frames - 1));
      res.push_back(std::max(r.max[1], r.max[2]));
    }
    c.below("solution_continuity_residual_N256", res[2], 1e-6);
    c.below("solution_continuity_residual_N128", res[1], 1e-6);
    c.above("solution_continuity_refinement_gain", res[0] / res[1], 100.0);
  }
  {
    const Scenario s = reference_scenario("pauli_packet");
    const PreparedRun run = prepare(s);
    for (NRModel mdl : {NRModel::kPauliA, NRModel::kPauliB}) {
      const auto tm = build_nr_model(*run.record, mdl);
      const Grid& g = tm->grid();
      std::vector<RealField> p0;
      for (int k = 0; k < 2; ++k) p0.emplace_back(tm->density(0, k), tm->density(0, k) + g.cells());
      const int last = tm->frames() - 1;
      const auto out = integrate_master_mol(g, 2, tabulated_flow(*tm), tm->frame_stride(), 0, p0, {last});
      double err = 0.0;
      for (int k = 0; k < 2; ++k)
        for (std::size_t q = 0; q < g.cells(); ++q) err = std::max(err, std::abs(out[0][k][q] - tm->density(last, k)[q]));
      const std::string name = nr_model_name(mdl);
      c.below(name + "_master_equation_residual", err, 1e-6);
      EnsembleOptions o;
      o.n = 20000;
      o.seed = kSeed;
      o.workers = workers;
      o.checkpoints = s.checkpoints;
      const auto eq = equivariance_test(*tm, o);
      tv_checks(c, name, eq.report, 0.05, 0.0);
    }
  }
  {
    const Grid g = Grid::line(512, 40.0);
    PauliGaussian pk;
    pk.momentum = Vec3(0, 0, 1.0);
    pk.spin = Weyl(std::cos(0.4), std::sin(0.4));
    const Spinor2Field phi = pauli_packets(g, {pk});
    double prev = 0.0;
    for (double m : {4.0, 8.0, 16.0, 32.0}) {
      const double dev = truncation_deviation(pauli_field(g, phi, m, 1.0));
      if (prev > 0) c.within("truncation_deviation_ratio_m" + fmt_t(m), prev / dev, 3.0, 5.0);
      prev = dev;
    }
    const Grid g2 = Grid::line(256, 40.0);
    prev = 0.0;
    for (double m : {4.0, 8.0, 16.0, 32.0}) {
      const auto rec = pauli_evolve(pauli_field(g2, pauli_packets(g2, {pk}), m, 1.0), 2.0, 0.01);
      const double drift = nr_density_drift(*build_nr_model(rec, NRModel::kTruncated1), rec, 1);
      if (prev > 0) c.at_least("truncated_drift_ratio_m" + fmt_t(m), prev / drift, 3.0);
      prev = drift;
    }
  }
  {
    const Grid g = Grid::line(512, 60.0);
    Normal gen(4);
    double verr = 0.0, rerr = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const double m = gen.uniform(0.5, 4.0);
      Weyl xi(gen.complex(), gen.complex());
      xi.normalize();
      const double c0 = gen.uniform(-3, 3), w = gen.uniform(1.0, 2.0), p = gen.uniform(-1, 1);
      Field psi(512);
      Spinor2Field phi{Field(512), Field(512)};
      for (int i = 0; i < 512; ++i) {
        const double z = g.coord(0, i) - c0;
        psi[i] = std::exp(-z * z / (4 * w * w)) * std::exp(cplx(0.0, p * z + 0.1 * z * z));
        phi[0][i] = psi[i] * xi(0);
        phi[1][i] = psi[i] * xi(1);
      }
      const auto ex = expand_currents(pauli_field(g, phi, m, 1.0));
      const auto forms = spin_eigenstate_forms(g, psi, xi, m);
      const auto gb = nr_guidance(ex, NRModel::kPauliB), g1 = nr_guidance(ex, NRModel::kTruncated1);
      const double dmax = max_abs(ex.density);
      for (int k = 0; k < 2; ++k) {
        const auto vb = nr_velocity(gb, k), v1 = nr_velocity(g1, k);
        const auto tb = nr_rate(gb, k), t1 = nr_rate(g1, k);
        for (int i = 0; i < 512; ++i) {
          // Velocities are ratios over |psi|^2; below 1e-4 of the peak, FFT roundoff
          // amplified by 1/|psi| exceeds the tolerance in both routes alike.
          if (ex.density[i] < 1e-4 * dmax) continue;
          for (int ax = 0; ax < 3; ++ax)
            verr = std::max({verr, std::abs(vb[ax][i] - forms.v_pauli[k][ax][i]),
                             std::abs(v1[ax][i] - forms.v_dirac[k][ax][i])});
          rerr = std::max({rerr, std::abs(tb[i] - forms.t_pauli[k][i]) / (1 + tb[i]),
                           std::abs(t1[i] - std::max(0.0, forms.t_dirac[k][i])) / (1 + t1[i])});
        }
      }
    }
    c.below("spin_eigenstate_velocity", verr, 1e-10);
    c.below("spin_eigenstate_rate", rerr, 1e-10);
  }
  return c.take();
}

std::vector<CheckResult> variations(int workers) {
  Checks c;
  {
    const Grid g = Grid::line(256, 40.0);
    Normal gen(5);
    double verr = 0.0, rate = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const double m = gen.uniform(0.5, 3.0);
      Weyl xi(gen.complex(), gen.complex());
      xi.normalize();
      const double c0 = gen.uniform(-3, 3), p = gen.uniform(-1, 1);
      ScalarField sf;
      sf.grid = g;
      sf.psi.resize(256);
      sf.mass = m;
      sf.charge = 1.0;
      for (auto& a : sf.A) a.assign(256, 0.0);
      sf.U.assign(256, 0.0);
      Spinor2Field phi{Field(256), Field(256)};
      for (int i = 0; i < 256; ++i) {
        const double z = g.coord(0, i) - c0;
        sf.psi[i] = std::exp(-z * z / 8.0) * std::exp(cplx(0.0, p * z + 0.05 * z * z));
        phi[0][i] = sf.psi[i] * xi(0);
        phi[1][i] = sf.psi[i] * xi(1);
      }
      const auto split = spin_split_guidance(pauli_field(g, phi, m, 1.0));
      const auto dbb = dbb_velocity(sf);
      for (int i = 0; i < 256; ++i) {
        const auto r = split_rates(split, i);
        rate = std::max({rate, r[0], r[1]});
        if (std::norm(sf.psi[i]) < 1e-6) continue;
        for (int k = 0; k < 2; ++k)
          for (int ax = 0; ax < 3; ++ax) verr = std::max(verr, std::abs(split.velocity[k][ax][i] - dbb[ax][i]));
      }
    }
    c.below("spin_split_eigenstate_dbb_velocity", verr, 1e-10);
    c.equal("spin_split_eigenstate_rates", rate, 0.0);
  }
  for (const char* name : {"spin_split_x", "reim_bump"}) {
    const Scenario s = reference_scenario(name);
    const PreparedRun run = prepare(s);
    const auto eq = reference_ensemble(run, s, 20000, kSeed, workers);
    tv_checks(c, name, eq.report, 0.05, 0.0);
    c.above(std::string(name) + "_jump_mean", eq.report.jump_mean, 0.1);
  }
  const auto paired = [&c](const std::string& prefix, const PairedComparison& p) {
    c.below(prefix + "_tv_a", p.tv_a, 3.0 * p.noise);
    c.below(prefix + "_tv_b", p.tv_b, 3.0 * p.noise);
    c.below(prefix + "_tv_between", p.tv_ab, 3.0 * std::sqrt(2.0) * p.noise);
    c.above(prefix + "_path_deviation_over_tolerance", p.max_deviation / p.integrator_tolerance, 10.0);
    c.above(prefix + "_fraction_deviating", p.fraction_deviating, 0.1);
  };
  const auto gauge = gauge_experiment(20000, kSeed, workers);
  paired("gauge", gauge);
  c.below("gauge_bohm_control_deviation", gauge.control_deviation, 1e-9);
  paired("rotation", rotation_experiment(20000, kSeed, workers));
  return c.take();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"algebra", "dynamics", "equivariance", "nonrel", "variations",
                                                 "manybody"};
  return names;
}

std::vector<SuiteResult> run_verify(const std::string& suite, int workers) {
  const auto& names = suite_names();
  require(suite == "all" || std::find(names.begin(), names.end(), suite) != names.end(), ErrorKind::kInvalid,
          "suite", "unknown suite '" + suite + "'");
  const std::map<std::string, std::function<std::vector<CheckResult>()>> suites = {
      {"algebra", algebra},
      {"dynamics", dynamics},
      {"equivariance", [workers] { return equivariance(workers); }},
      {"nonrel", [workers] { return nonrel(workers); }},
      {"variations", [workers] { return variations(workers); }},
      {"manybody", [workers] { return manybody(workers); }},
  };
  std::vector<SuiteResult> out;
  for (const auto& name : names) {
    if (suite != "all" && suite != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult r;
    r.suite = name;
    r.checks = suites.at(name)();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json verify_json(const std::vector<SuiteResult>& results) {
  nlohmann::json j;
  bool all = true;
  j["suites"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json s;
    s["suite"] = r.suite;
    s["pass"] = r.pass();
    s["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks)
      s["checks"].push_back({{"name", c.name},
                             {"pass", c.pass},
                             {"measured", c.measured},
                             {"relation", c.relation},
                             {"threshold", c.threshold}});
    all = all && r.pass();
    j["suites"].push_back(std::move(s));
  }
  j["pass"] = all;
  return j;
}

}  // namespace zigzag
