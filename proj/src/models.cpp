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

#include "zigzag/models.hpp"

#include <algorithm>
#include <cmath>

#include "zigzag/error.hpp"
#include "zigzag/interpolation.hpp"
#include "zigzag/wave_dynamics.hpp"

namespace zigzag {

NodePolicy default_node_policy(double mean_density, double mass) {
  NodePolicy p;
  p.floor = 1e-12 * mean_density;
  p.cap = 1e3 * (mass > 0 ? mass : 1.0);
  return p;
}

namespace {

double mean_record_density(const WaveRecord& rec) {
  double s = 0.0;
  const cplx* f = rec.frame(0);
  for (std::size_t i = 0; i < rec.frame_size(); ++i) s += std::norm(f[i]);
  return s / static_cast<double>(rec.grid.cells());
}

}  // namespace

DiracZigzagModel::DiracZigzagModel(std::shared_ptr<const WaveRecord> record) : rec_(std::move(record)) {
  require(rec_->kind == "dirac1d" || rec_->kind == "dirac3d", ErrorKind::kInvalid, "model",
          "zig-zag model needs a dirac1d or dirac3d record");
  require(rec_->frames >= 2, ErrorKind::kInvalid, "t_final", "record needs at least two frames");
  policy_ = default_node_policy(mean_record_density(*rec_), rec_->mass);
}

GuidanceEval DiracZigzagModel::evaluate(const double* x, double t, int label) const {
  cplx comps[4];
  rec_->sample(x, t, comps);
  const ChiralPair p = chiral_pair_from_components(*rec_, comps);
  const Chirality c = label == 0 ? Chirality::R : Chirality::L;
  const VelocityResult vr = velocity_field(c == Chirality::R ? p.right : p.left, c, policy_.floor);
  const RatePair rates = jump_rates(p.right, p.left, rec_->mass, policy_);
  GuidanceEval e;
  e.degenerate = vr.degenerate;
  if (rec_->kind == "dirac1d") {
    e.v[0] = vr.v(2);
  } else {
    for (int a = 0; a < 3; ++a) e.v[a] = vr.v(a);
  }
  e.channels = 1;
  e.jump[0] = JumpChannel{1 - label, c == Chirality::R ? rates.t_RL : rates.t_LR};
  e.minimal = rates.t_LR * rates.t_RL == 0.0;
  e.speed_excess = std::abs(vr.v.norm() - 1.0);
  return e;
}

std::vector<RealField> DiracZigzagModel::label_densities(double t) const {
  const int k = rec_->frame_at(t);
  const std::size_t n = rec_->grid.cells();
  std::vector<RealField> out(2, RealField(n));
  for (std::size_t q = 0; q < n; ++q) {
    const ChiralPair p = record_chiral_pair(*rec_, k, q);
    out[0][q] = p.right.squaredNorm();
    out[1][q] = p.left.squaredNorm();
  }
  return out;
}

BohmModel::BohmModel(std::shared_ptr<const WaveRecord> record) : rec_(std::move(record)) {
  require(rec_->kind == "dirac1d" || rec_->kind == "dirac3d", ErrorKind::kInvalid, "model",
          "Bohm model needs a dirac1d or dirac3d record");
  policy_ = default_node_policy(mean_record_density(*rec_), rec_->mass);
}

GuidanceEval BohmModel::evaluate(const double* x, double t, int) const {
  cplx comps[4];
  rec_->sample(x, t, comps);
  const ChiralPair p = chiral_pair_from_components(*rec_, comps);
  const VelocityResult vr = bohm_velocity(assemble(p.right, p.left), policy_.floor);
  GuidanceEval e;
  e.degenerate = vr.degenerate;
  if (rec_->kind == "dirac1d") {
    e.v[0] = vr.v(2);
  } else {
    for (int a = 0; a < 3; ++a) e.v[a] = vr.v(a);
  }
  e.speed_excess = std::max(0.0, vr.v.norm() - 1.0);
  return e;
}

std::vector<RealField> BohmModel::label_densities(double t) const {
  const int k = rec_->frame_at(t);
  const std::size_t n = rec_->grid.cells();
  std::vector<RealField> out(1, RealField(n, 0.0));
  for (int c = 0; c < rec_->components; ++c) {
    const cplx* f = rec_->component(k, c);
    for (std::size_t q = 0; q < n; ++q) out[0][q] += std::norm(f[q]);
  }
  return out;
}

TabulatedModel::TabulatedModel(const Grid& grid, std::vector<std::string> labels, double t0, double stride,
                               int frames, std::size_t cap_bytes)
    : grid_(grid), labels_(std::move(labels)), t0_(t0), stride_(stride), frames_(frames) {
  require(labels_.size() == 2, ErrorKind::kInvalid, "model", "tabulated models have two labels");
  require(frames >= 2, ErrorKind::kInvalid, "t_final", "tabulated model needs at least two frames");
  const double bytes = static_cast<double>(grid.cells()) * components() * frames * sizeof(double);
  require(bytes <= static_cast<double>(cap_bytes), ErrorKind::kResource, "memory_cap_mb",
          "guidance tables exceed the configured memory cap");
  data_.assign(grid.cells() * static_cast<std::size_t>(components()) * frames, 0.0);
}

void TabulatedModel::finalize(double mass) {
  double s = 0.0;
  for (int c = 0; c < label_count(); ++c) {
    const double* d = density(0, c);
    for (std::size_t q = 0; q < grid_.cells(); ++q) s += std::max(d[q], 0.0);
  }
  policy_ = default_node_policy(s / static_cast<double>(grid_.cells()), mass);
}

GuidanceEval TabulatedModel::evaluate(const double* x, double t, int label) const {
  const double u = (t - t0_) / stride_;
  int k = static_cast<int>(std::floor(u));
  k = std::clamp(k, 0, frames_ - 2);
  const double w = std::clamp(u - k, 0.0, 1.0);
  const Stencil s = cubic_stencil(grid_, x);
  auto at = [&](int c) {
    return (1.0 - w) * apply(s, slot(k, c)) + w * apply(s, slot(k + 1, c));
  };
  const int other = 1 - label;
  const double den = at(comp(label, 0));
  const double vden = at(comp(label, 1));
  const double X = at(per_label() * label_count());
  const double Y = at(per_label() * label_count() + 1);
  const double sigma = label == 0 ? -1.0 : 1.0;
  const double kap = at(comp(label, 2 + grid_.dim));
  const double kap_o = at(comp(other, 2 + grid_.dim));
  auto numerator = [](double sg, double X_, double Y_, double k_) {
    return std::max(0.0, std::max(sg * X_, 0.0) + k_ * std::max(sg * Y_, 0.0));
  };

  GuidanceEval e;
  // Rates share the velocity denominator; den is only the sampling density.
  e.degenerate = !(den > policy_.floor) || !(vden > policy_.floor);
  double n2 = 0.0;
  if (!e.degenerate) {
    for (int a = 0; a < grid_.dim; ++a) {
      e.v[a] = at(comp(label, 2 + a)) / vden;
      n2 += e.v[a] * e.v[a];
    }
  }
  const double num = numerator(sigma, X, Y, kap);
  const double num_rev = numerator(-sigma, X, Y, kap_o);
  e.channels = 1;
  e.jump[0] = JumpChannel{other, capped_rate(num, vden, policy_)};
  e.minimal = num * num_rev == 0.0;
  e.speed_excess = std::max(0.0, std::sqrt(n2) - 1.0);
  return e;
}

void TabulatedModel::frame_flow(int k, double mask, std::vector<std::array<RealField, 3>>& velocity,
                                std::vector<RealField>& rate) const {
  const std::size_t n = grid_.cells();
  velocity.assign(label_count(), {});
  rate.assign(label_count(), RealField(n, 0.0));
  const double* X = slot(k, per_label() * label_count());
  const double* Y = slot(k, per_label() * label_count() + 1);
  for (int c = 0; c < label_count(); ++c) {
    const double sigma = c == 0 ? -1.0 : 1.0;
    const double* vden = slot(k, comp(c, 1));
    const double* kap = slot(k, comp(c, 2 + grid_.dim));
    for (int a = 0; a < grid_.dim; ++a) velocity[c][a].assign(n, 0.0);
    for (std::size_t q = 0; q < n; ++q) {
      if (!(vden[q] > mask)) continue;
      for (int a = 0; a < grid_.dim; ++a) velocity[c][a][q] = slot(k, comp(c, 2 + a))[q] / vden[q];
      const double num = std::max(0.0, std::max(sigma * X[q], 0.0) + kap[q] * std::max(sigma * Y[q], 0.0));
      rate[c][q] = num / vden[q];
    }
  }
}

std::vector<RealField> TabulatedModel::label_densities(double t) const {
  long k = std::lround((t - t0_) / stride_);
  require(k >= 0 && k < frames_, ErrorKind::kInvalid, "checkpoints", "time outside the model window");
  std::vector<RealField> out;
  for (int c = 0; c < label_count(); ++c) {
    const double* d = density(static_cast<int>(k), c);
    RealField f(d, d + grid_.cells());
    for (auto& v : f) v = std::max(v, 0.0);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace zigzag
