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

#include "zigzag/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "zigzag/error.hpp"
#include "zigzag/fft.hpp"
#include "zigzag/wave_dynamics.hpp"

namespace zigzag {

double linear_interpolate(const Grid& grid, const RealField& f, const double* x) {
  std::array<int, 3> i0{}, i1{};
  std::array<double, 3> w{};
  for (int a = 0; a < grid.dim; ++a) {
    const int n = grid.points[a];
    const double u = (x[a] + 0.5 * grid.extent[a]) / grid.spacing(a);
    const double fl = std::floor(u);
    w[a] = u - fl;
    i0[a] = ((static_cast<int>(fl) % n) + n) % n;
    i1[a] = (i0[a] + 1) % n;
  }
  if (grid.dim == 1) return (1 - w[0]) * f[i0[0]] + w[0] * f[i1[0]];
  const std::size_t n1 = grid.points[1];
  if (grid.dim == 2) {
    auto at = [&](int i, int j) { return f[static_cast<std::size_t>(i) * n1 + j]; };
    return (1 - w[0]) * ((1 - w[1]) * at(i0[0], i0[1]) + w[1] * at(i0[0], i1[1])) +
           w[0] * ((1 - w[1]) * at(i1[0], i0[1]) + w[1] * at(i1[0], i1[1]));
  }
  const std::size_t n2 = grid.points[2];
  double acc = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const double wt = (a ? w[0] : 1 - w[0]) * (b ? w[1] : 1 - w[1]) * (c ? w[2] : 1 - w[2]);
        const std::size_t idx = (static_cast<std::size_t>(a ? i1[0] : i0[0]) * n1 + (b ? i1[1] : i0[1])) * n2 +
                                (c ? i1[2] : i0[2]);
        acc += wt * f[idx];
      }
  return acc;
}

EquilibriumSampler::EquilibriumSampler(const Grid& grid, std::vector<RealField> densities)
    : grid_(grid), densities_(std::move(densities)) {
  require(!densities_.empty(), ErrorKind::kInvalid, "initial", "no densities to sample");
  total_.assign(grid.cells(), 0.0);
  for (const auto& d : densities_) {
    require(d.size() == grid.cells(), ErrorKind::kInvalid, "initial", "density size does not match grid");
    for (std::size_t q = 0; q < d.size(); ++q) {
      require(d[q] >= 0 && std::isfinite(d[q]), ErrorKind::kInvalid, "initial", "densities must be non-negative");
      total_[q] += d[q];
    }
  }
  total_max_ = *std::max_element(total_.begin(), total_.end());
  require(total_max_ > 0, ErrorKind::kInvalid, "initial", "all-zero density");
  if (grid.dim == 1) {
    const int n = grid.points[0];
    cumulative_.resize(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += 0.5 * (total_[i] + total_[(i + 1) % n]);
      cumulative_[i] = acc;
    }
  }
}

Point EquilibriumSampler::draw_position(RandomStream& rng) const {
  Point x{};
  if (grid_.dim == 1) {
    const int n = grid_.points[0];
    const double r = rng.uniform() * cumulative_.back();
    int i = static_cast<int>(std::upper_bound(cumulative_.begin(), cumulative_.end(), r) - cumulative_.begin());
    i = std::min(i, n - 1);
    const double before = i > 0 ? cumulative_[i - 1] : 0.0;
    const double d0 = total_[i], d1 = total_[(i + 1) % n];
    // Solve d0 s + (d1 - d0) s^2 / 2 = r - before for s in [0, 1].
    const double a = 0.5 * (d1 - d0), b = d0, c = std::max(0.0, r - before);
    const double disc = std::max(0.0, b * b + 4.0 * a * c);
    double s = (b + std::sqrt(disc)) > 0 ? 2.0 * c / (b + std::sqrt(disc)) : 0.5;
    s = std::clamp(s, 0.0, 1.0);
    x[0] = grid_.wrap(0, grid_.coord(0, i) + s * grid_.spacing(0));
    return x;
  }
  const double envelope = 1.01 * total_max_;
  for (;;) {
    for (int a = 0; a < grid_.dim; ++a) x[a] = -0.5 * grid_.extent[a] + rng.uniform() * grid_.extent[a];
    if (rng.uniform() * envelope < linear_interpolate(grid_, total_, x.data())) return x;
  }
}

int EquilibriumSampler::draw_label(const Point& x, RandomStream& rng) const {
  const int L = static_cast<int>(densities_.size());
  if (L == 1) return 0;
  std::vector<double> w(L);
  double sum = 0.0;
  for (int c = 0; c < L; ++c) {
    w[c] = std::max(0.0, linear_interpolate(grid_, densities_[c], x.data()));
    sum += w[c];
  }
  const double u = rng.uniform() * sum;
  double acc = 0.0;
  for (int c = 0; c < L; ++c) {
    acc += w[c];
    if (u < acc && w[c] > 0) return c;
  }
  for (int c = L - 1; c >= 0; --c)
    if (w[c] > 0) return c;
  return 0;
}

ParticleState EquilibriumSampler::draw(std::uint64_t seed, std::uint64_t index, double t) const {
  RandomStream pos(seed, index, RngDomain::kPosition);
  RandomStream lab(seed, index, RngDomain::kLabel);
  ParticleState s;
  s.x = draw_position(pos);
  s.label = draw_label(s.x, lab);
  s.t = t;
  return s;
}

std::vector<ParticleState> sample_equilibrium(const Grid& grid, const std::vector<RealField>& densities,
                                              std::size_t n, std::uint64_t seed, double t) {
  EquilibriumSampler sampler(grid, densities);
  std::vector<ParticleState> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sampler.draw(seed, i, t);
  return out;
}

int default_bins(std::size_t n) {
  int b = 1;
  while (static_cast<std::size_t>(b) * b * b < n) ++b;
  return b;
}

namespace {

// Integral over [a, b] of the unit hat centred at c with half width h.
double hat_integral(double a, double b, double c, double h) {
  auto H = [&](double x) {
    const double u = (x - c) / h;
    if (u <= -1) return 0.0;
    if (u <= 0) return 0.5 * h * (1 + u) * (1 + u);
    if (u <= 1) return h * (1 - 0.5 * (1 - u) * (1 - u));
    return h;
  };
  return H(b) - H(a);
}

// Nonzero bin overlaps of each grid point's hat along one axis.
std::vector<std::vector<std::pair<int, double>>> hat_bins(const Grid& g, int axis, int bins) {
  const int n = g.points[axis];
  const double L = g.extent[axis], h = g.spacing(axis), w = L / bins;
  std::vector<std::vector<std::pair<int, double>>> out(n);
  for (int i = 0; i < n; ++i) {
    const double c = g.coord(axis, i);
    for (double image : {c - L, c, c + L}) {
      const int b0 = std::max(0, static_cast<int>(std::floor((image - h + 0.5 * L) / w)));
      const int b1 = std::min(bins - 1, static_cast<int>(std::floor((image + h + 0.5 * L) / w)));
      for (int b = b0; b <= b1; ++b) {
        const double lo = -0.5 * L + b * w;
        const double v = hat_integral(lo, lo + w, image, h) / h;
        if (v > 0) out[i].push_back({b, v});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> bin_masses(const Grid& grid, const RealField& density, int bins) {
  const int d = grid.dim;
  std::size_t total_bins = 1;
  for (int a = 0; a < d; ++a) total_bins *= static_cast<std::size_t>(bins);
  std::vector<double> out(total_bins, 0.0);
  std::array<std::vector<std::vector<std::pair<int, double>>>, 3> hb;
  for (int a = 0; a < d; ++a) hb[a] = hat_bins(grid, a, bins);
  const double vol = grid.cell_volume();
  const std::size_t n1 = d > 1 ? grid.points[1] : 1, n2 = d > 2 ? grid.points[2] : 1;
  for (std::size_t q = 0; q < density.size(); ++q) {
    if (density[q] == 0.0) continue;
    const int i = static_cast<int>(q / (n1 * n2));
    const int j = static_cast<int>((q / n2) % n1);
    const int k = static_cast<int>(q % n2);
    const double v = density[q] * vol;
    if (d == 1) {
      for (auto [b, w] : hb[0][i]) out[b] += v * w;
    } else if (d == 2) {
      for (auto [b0, w0] : hb[0][i])
        for (auto [b1, w1] : hb[1][j]) out[static_cast<std::size_t>(b0) * bins + b1] += v * w0 * w1;
    } else {
      for (auto [b0, w0] : hb[0][i])
        for (auto [b1, w1] : hb[1][j])
          for (auto [b2, w2] : hb[2][k])
            out[(static_cast<std::size_t>(b0) * bins + b1) * bins + b2] += v * w0 * w1 * w2;
    }
  }
  return out;
}

std::vector<double> histogram(const Grid& grid, const std::vector<Point>& positions, int bins) {
  std::size_t total_bins = 1;
  for (int a = 0; a < grid.dim; ++a) total_bins *= static_cast<std::size_t>(bins);
  std::vector<double> out(total_bins, 0.0);
  for (const auto& x : positions) {
    std::size_t idx = 0;
    for (int a = 0; a < grid.dim; ++a) {
      const double u = (grid.wrap(a, x[a]) + 0.5 * grid.extent[a]) / grid.extent[a];
      const int b = std::clamp(static_cast<int>(std::floor(u * bins)), 0, bins - 1);
      idx = idx * bins + b;
    }
    out[idx] += 1.0;
  }
  return out;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double sp = 0.0, sq = 0.0;
  for (double v : p) sp += v;
  for (double v : q) sq += v;
  if (sp <= 0 || sq <= 0) return (sp <= 0 && sq <= 0) ? 0.0 : 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] / sp - q[i] / sq);
  return 0.5 * acc;
}

double expected_tv_noise(const std::vector<double>& p, std::size_t n) {
  double s = 0.0;
  for (double v : p) s += v;
  double acc = 0.0;
  for (double v : p) {
    const double pi = std::clamp(v / s, 0.0, 1.0);  // MOL targets can dip below zero at roundoff
    acc += std::sqrt(2.0 * pi * (1.0 - pi) / (std::numbers::pi * static_cast<double>(n)));
  }
  return 0.5 * acc;
}

double ks_statistic(const Grid& grid, const RealField& density, std::vector<double> positions) {
  require(grid.dim == 1, ErrorKind::kInvalid, "grid", "KS statistic is one-dimensional");
  const int n = grid.points[0];
  const double h = grid.spacing(0);
  std::vector<double> cum(n + 1, 0.0);
  for (int i = 0; i < n; ++i) cum[i + 1] = cum[i] + 0.5 * h * (density[i] + density[(i + 1) % n]);
  const double M = cum[n];
  if (M <= 0 || positions.empty()) return 1.0;
  auto cdf = [&](double x) {
    const double u = (grid.wrap(0, x) + 0.5 * grid.extent[0]) / h;
    const int i = std::clamp(static_cast<int>(std::floor(u)), 0, n - 1);
    const double s = u - i;
    const double d0 = density[i], d1 = density[(i + 1) % n];
    return (cum[i] + h * (d0 * s + 0.5 * (d1 - d0) * s * s)) / M;
  };
  for (auto& x : positions) x = grid.wrap(0, x);
  std::sort(positions.begin(), positions.end());
  const double N = static_cast<double>(positions.size());
  double D = 0.0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const double F = cdf(positions[k]);
    D = std::max({D, std::abs(F - k / N), std::abs((k + 1) / N - F)});
  }
  return D;
}

CheckpointStats compare_states(const Grid& grid, const std::vector<RealField>& target,
                               const std::vector<ParticleState>& states, int bins, double t) {
  const int L = static_cast<int>(target.size());
  CheckpointStats cs;
  cs.t = t;
  RealField total(grid.cells(), 0.0);
  for (const auto& d : target)
    for (std::size_t q = 0; q < total.size(); ++q) total[q] += d[q];
  std::vector<Point> all;
  std::vector<std::vector<Point>> per(L);
  std::vector<double> xs;
  for (const auto& s : states) {
    all.push_back(s.x);
    per[s.label].push_back(s.x);
    xs.push_back(s.x[0]);
  }
  const auto target_total = bin_masses(grid, total, bins);
  cs.tv_total = total_variation(histogram(grid, all, bins), target_total);
  cs.tv_noise = expected_tv_noise(target_total, states.size());
  double mass_total = 0.0;
  for (double v : target_total) mass_total += v;
  for (int c = 0; c < L; ++c) {
    const auto tm = bin_masses(grid, target[c], bins);
    double mc = 0.0;
    for (double v : tm) mc += v;
    cs.label_target.push_back(mass_total > 0 ? mc / mass_total : 0.0);
    cs.label_fraction.push_back(states.empty() ? 0.0 : static_cast<double>(per[c].size()) / states.size());
    cs.tv_label.push_back(total_variation(histogram(grid, per[c], bins), tm));
  }
  if (grid.dim == 1) cs.ks = ks_statistic(grid, total, xs);
  return cs;
}

EnsembleRun run_ensemble(const GuidanceModel& model, const std::vector<ParticleState>& init, double t_final,
                         const EnsembleOptions& options, TargetFn target) {
  const std::size_t n = init.size();
  EnsembleRun run;
  run.states.assign(options.checkpoints.size(), std::vector<ParticleState>(n));
  run.jump_counts.assign(n, 0);
  std::vector<TrajectoryStats> stats(n);
  std::vector<Trajectory> kept(std::min(options.keep, n));
  const int workers = std::max(1, options.workers);

  auto work = [&](int w) {
    PdmpOptions po = options.pdmp;
    po.checkpoints = options.checkpoints;
    for (std::size_t i = static_cast<std::size_t>(w); i < n; i += static_cast<std::size_t>(workers)) {
      po.keep_samples = i < options.keep;
      Trajectory tr = sample_trajectory(model, init[i], t_final, options.seed, i, po);
      for (std::size_t c = 0; c < options.checkpoints.size(); ++c) run.states[c][i] = tr.checkpoint_states[c];
      run.jump_counts[i] = tr.jump_count;
      stats[i] = tr.stats;
      if (i < options.keep) kept[i] = std::move(tr);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  run.kept = std::move(kept);

  EnsembleReport& r = run.report;
  r.seed = options.seed;
  r.n = n;
  r.bins = options.bins > 0 ? options.bins : default_bins(n);
  for (int c = 0; c < model.label_count(); ++c) r.labels.push_back(model.label_name(c));
  for (std::size_t i = 0; i < n; ++i) r.stats.merge(stats[i]);
  double mean = 0.0;
  for (auto c : run.jump_counts) mean += static_cast<double>(c);
  mean /= std::max<std::size_t>(1, n);
  double var = 0.0;
  for (auto c : run.jump_counts) var += (c - mean) * (c - mean);
  r.jump_mean = mean;
  r.jump_var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
  r.min_density_hit = r.stats.evaluations
                          ? static_cast<double>(r.stats.degenerate_hits) / static_cast<double>(r.stats.evaluations)
                          : 0.0;
  for (std::size_t c = 0; c < options.checkpoints.size(); ++c) {
    const double t = options.checkpoints[c];
    const auto dens = target ? target(static_cast<int>(c), t) : model.label_densities(t);
    r.checkpoints.push_back(compare_states(model.grid(), dens, run.states[c], r.bins, t));
  }
  return run;
}

EnsembleRun equivariance_test(const GuidanceModel& model, const EnsembleOptions& options) {
  require(!options.checkpoints.empty(), ErrorKind::kInvalid, "checkpoints", "no checkpoints given");
  const double t0 = model.t_begin();
  const double t_final = *std::max_element(options.checkpoints.begin(), options.checkpoints.end());
  require(t_final <= model.t_end() + 1e-9, ErrorKind::kInvalid, "checkpoints",
          "checkpoint beyond the record window");
  const auto init = sample_equilibrium(model.grid(), model.label_densities(t0), options.n, options.seed, t0);
  if (t_final <= t0) {
    EnsembleRun run;
    run.report.seed = options.seed;
    run.report.n = options.n;
    run.report.bins = options.bins > 0 ? options.bins : default_bins(options.n);
    for (int c = 0; c < model.label_count(); ++c) run.report.labels.push_back(model.label_name(c));
    run.states.assign(options.checkpoints.size(), init);
    for (double t : options.checkpoints)
      run.report.checkpoints.push_back(
          compare_states(model.grid(), model.label_densities(t), init, run.report.bins, t));
    run.jump_counts.assign(options.n, 0);
    return run;
  }
  return run_ensemble(model, init, t_final, options);
}

nlohmann::json report_json(const EnsembleReport& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["bins"] = r.bins;
  j["labels"] = r.labels;
  std::vector<double> cps, tv, ks, noise;
  std::vector<std::vector<double>> per(r.labels.size()), frac(r.labels.size());
  for (const auto& c : r.checkpoints) {
    cps.push_back(c.t);
    tv.push_back(c.tv_total);
    ks.push_back(c.ks);
    noise.push_back(c.tv_noise);
    for (std::size_t l = 0; l < r.labels.size(); ++l) {
      per[l].push_back(c.tv_label[l]);
      frac[l].push_back(c.label_fraction[l]);
    }
  }
  j["checkpoints"] = cps;
  j["tv_total"] = tv;
  j["tv_R"] = per.size() > 0 ? per[0] : std::vector<double>{};
  j["tv_L"] = per.size() > 1 ? per[1] : std::vector<double>{};
  nlohmann::json labels = nlohmann::json::object();
  for (std::size_t l = 0; l < r.labels.size(); ++l)
    labels[r.labels[l]] = {{"tv", per[l]}, {"fraction", frac[l]}};
  j["tv_labels"] = labels;
  j["tv_noise_expected"] = noise;
  j["ks"] = ks;
  j["jump_stats"] = {{"mean", r.jump_mean}, {"var", r.jump_var}};
  j["violations"] = {{"max_speed_excess", r.stats.max_speed_excess},
                     {"min_density_hit", r.min_density_hit},
                     {"minimality", r.stats.minimality_violations}};
  j["evaluations"] = r.stats.evaluations;
  return j;
}

FlowProvider tabulated_flow(const TabulatedModel& model, double mask_fraction) {
  return [&model, mask_fraction](int k) {
    const std::size_t n = model.grid().cells();
    double vmax = 0.0;
    for (int c = 0; c < model.label_count(); ++c) {
      const double* d = model.velocity_den(k, c);
      for (std::size_t q = 0; q < n; ++q) vmax = std::max(vmax, d[q]);
    }
    FlowFrame f;
    std::vector<RealField> rate;
    model.frame_flow(k, mask_fraction * vmax, f.velocity, rate);
    f.out.resize(model.label_count());
    for (int c = 0; c < model.label_count(); ++c) f.out[c].emplace_back(1 - c, std::move(rate[c]));
    return f;
  };
}

std::vector<std::vector<RealField>> integrate_master_mol(const Grid& grid, int labels, const FlowProvider& flow,
                                                         double stride, int frame_begin,
                                                         std::vector<RealField> p0,
                                                         const std::vector<int>& out_frames) {
  Spectral sp(grid);
  const std::size_t n = grid.cells();
  const double dt = 2.0 * stride;
  auto rhs = [&](const std::vector<RealField>& p, const FlowFrame& f) {
    std::vector<RealField> d(labels, RealField(n, 0.0));
    for (int c = 0; c < labels; ++c) {
      std::array<RealField, 3> flux;
      for (int a = 0; a < grid.dim; ++a) {
        flux[a].resize(n);
        for (std::size_t q = 0; q < n; ++q) flux[a][q] = p[c][q] * f.velocity[c][a][q];
      }
      const RealField div = sp.divergence({&flux[0], grid.dim > 1 ? &flux[1] : nullptr,
                                           grid.dim > 2 ? &flux[2] : nullptr});
      for (std::size_t q = 0; q < n; ++q) d[c][q] -= div[q];
      for (const auto& [target, rate] : f.out[c])
        for (std::size_t q = 0; q < n; ++q) {
          const double m = rate[q] * p[c][q];
          d[c][q] -= m;
          d[target][q] += m;
        }
    }
    return d;
  };
  auto axpy = [&](const std::vector<RealField>& p, const std::vector<RealField>& k, double a) {
    std::vector<RealField> out = p;
    for (int c = 0; c < labels; ++c)
      for (std::size_t q = 0; q < n; ++q) out[c][q] += a * k[c][q];
    return out;
  };

  std::vector<std::vector<RealField>> out(out_frames.size());
  int last = frame_begin;
  for (int f : out_frames) {
    require((f - frame_begin) % 2 == 0 && f >= frame_begin, ErrorKind::kInvalid, "checkpoints",
            "master-equation output frames must be even offsets");
    last = std::max(last, f);
  }
  std::vector<RealField> p = std::move(p0);
  auto save = [&](int k) {
    for (std::size_t i = 0; i < out_frames.size(); ++i)
      if (out_frames[i] == k) out[i] = p;
  };
  save(frame_begin);
  FlowFrame cur = flow(frame_begin);
  for (int k = frame_begin; k < last; k += 2) {
    const FlowFrame mid = flow(k + 1);
    FlowFrame end = flow(k + 2);
    const auto k1 = rhs(p, cur);
    const auto k2 = rhs(axpy(p, k1, 0.5 * dt), mid);
    const auto k3 = rhs(axpy(p, k2, 0.5 * dt), mid);
    const auto k4 = rhs(axpy(p, k3, dt), end);
    for (int c = 0; c < labels; ++c)
      for (std::size_t q = 0; q < n; ++q)
        p[c][q] += dt / 6.0 * (k1[c][q] + 2 * k2[c][q] + 2 * k3[c][q] + k4[c][q]);
    cur = std::move(end);
    save(k + 2);
  }
  return out;
}

std::vector<std::vector<RealField>> master_equation_dirac1d(const WaveRecord& rec, const RealField& pR0,
                                                            const RealField& pL0,
                                                            const std::vector<int>& out_frames) {
  require(rec.kind == "dirac1d", ErrorKind::kInvalid, "record", "chiral master equation needs a dirac1d record");
  const std::size_t n = rec.grid.cells();
  for (std::size_t q = 0; q < n; ++q)
    require(pR0[q] >= 0 && pL0[q] >= 0, ErrorKind::kInvalid, "master_equation", "initial densities must be >= 0");
  const double m = rec.mass, dt = rec.stride;
  auto rates = [&](int k, RealField& a, RealField& b) {
    a.assign(n, 0.0);
    b.assign(n, 0.0);
    const cplx* f = rec.component(k, 0);
    const cplx* g = rec.component(k, 1);
    for (std::size_t q = 0; q < n; ++q) {
      const double F = 2.0 * m * (std::conj(f[q]) * g[q]).imag();
      if (F > 0) a[q] = F / std::max(std::norm(g[q]), 1e-300);
      if (F < 0) b[q] = -F / std::max(std::norm(f[q]), 1e-300);
    }
  };
  // Exact solution of dR = a L - b R, dL = b R - a L over tau.
  auto exchange = [&](RealField& R, RealField& L, const RealField& a, const RealField& b, double tau) {
    for (std::size_t q = 0; q < n; ++q) {
      const double lam = a[q] + b[q];
      if (lam <= 0) continue;
      const double S = R[q] + L[q];
      const double Rinf = a[q] * S / lam;
      R[q] = Rinf + (R[q] - Rinf) * std::exp(-lam * tau);
      L[q] = S - R[q];
    }
  };
  FFT fft(rec.grid, 2);
  const auto k = rec.grid.wavenumbers(0);
  Field buf(2 * n);
  const cplx I(0.0, 1.0);
  auto transport = [&](RealField& R, RealField& L) {
    for (std::size_t q = 0; q < n; ++q) {
      buf[q] = R[q];
      buf[n + q] = L[q];
    }
    fft.forward(buf.data());
    for (std::size_t q = 0; q < n; ++q) {
      buf[q] *= std::exp(-I * (k[q] * dt));
      buf[n + q] *= std::exp(I * (k[q] * dt));
    }
    fft.backward(buf.data());
    for (std::size_t q = 0; q < n; ++q) {
      R[q] = buf[q].real();
      L[q] = buf[n + q].real();
    }
  };

  int last = 0;
  for (int f : out_frames) last = std::max(last, f);
  require(last < rec.frames, ErrorKind::kInvalid, "checkpoints", "master-equation frames beyond the record");
  std::vector<std::vector<RealField>> out(out_frames.size());
  RealField R = pR0, L = pL0, a0, b0, a1, b1;
  auto save = [&](int kf) {
    for (std::size_t i = 0; i < out_frames.size(); ++i)
      if (out_frames[i] == kf) out[i] = {R, L};
  };
  save(0);
  rates(0, a0, b0);
  for (int kf = 0; kf < last; ++kf) {
    rates(kf + 1, a1, b1);
    exchange(R, L, a0, b0, 0.5 * dt);
    transport(R, L);
    exchange(R, L, a1, b1, 0.5 * dt);
    std::swap(a0, a1);
    std::swap(b0, b1);
    save(kf + 1);
  }
  return out;
}

}  // namespace zigzag
