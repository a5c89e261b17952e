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
#include <memory>
#include <string>
#include <vector>

#include "zigzag/guidance.hpp"
#include "zigzag/pdmp.hpp"
#include "zigzag/wave_record.hpp"

namespace zigzag {

// Node handling shared by all models: floor relative to the mean density,
// rate cap proportional to the mass.
NodePolicy default_node_policy(double mean_density, double mass);

// Zig-zag dynamics guided by a dirac1d or dirac3d record. Label 0 = R, 1 = L.
class DiracZigzagModel : public GuidanceModel {
 public:
  explicit DiracZigzagModel(std::shared_ptr<const WaveRecord> record);

  const Grid& grid() const override { return rec_->grid; }
  int label_count() const override { return 2; }
  std::string label_name(int label) const override { return label == 0 ? "R" : "L"; }
  double t_begin() const override { return rec_->t0; }
  double t_end() const override { return rec_->t_end(); }
  double frame_stride() const override { return rec_->stride; }
  double rate_cap() const override { return policy_.cap; }
  GuidanceEval evaluate(const double* x, double t, int label) const override;
  std::vector<RealField> label_densities(double t) const override;
  bool luminal() const override { return true; }

  const WaveRecord& record() const { return *rec_; }
  const NodePolicy& policy() const { return policy_; }

 private:
  std::shared_ptr<const WaveRecord> rec_;
  NodePolicy policy_;
};

// Deterministic Bohm velocity psi^dagger alpha psi / psi^dagger psi; one label.
class BohmModel : public GuidanceModel {
 public:
  explicit BohmModel(std::shared_ptr<const WaveRecord> record);

  const Grid& grid() const override { return rec_->grid; }
  int label_count() const override { return 1; }
  std::string label_name(int) const override { return "D"; }
  double t_begin() const override { return rec_->t0; }
  double t_end() const override { return rec_->t_end(); }
  double frame_stride() const override { return rec_->stride; }
  double rate_cap() const override { return policy_.cap; }
  GuidanceEval evaluate(const double* x, double t, int label) const override;
  std::vector<RealField> label_densities(double t) const override;

 private:
  std::shared_ptr<const WaveRecord> rec_;
  NodePolicy policy_;
};

// Two-label model given by tabulated real fields per frame:
//   velocity_c = num_c / vden_c,
//   rate out of c = max(0, [sigma_c X]^+ + kappa_c [sigma_c Y]^+) / vden_c,
// with sigma_0 = -1, sigma_1 = +1, so X is the net gain of label 0. den_c is
// the density used for sampling and comparison, which can differ from vden_c
// in truncated models.
class TabulatedModel : public GuidanceModel {
 public:
  enum Slot { kDensity = 0, kVelocityDen = 1, kVelocityNum = 2 };

  TabulatedModel(const Grid& grid, std::vector<std::string> labels, double t0, double stride, int frames,
                 std::size_t cap_bytes);

  const Grid& grid() const override { return grid_; }
  int label_count() const override { return static_cast<int>(labels_.size()); }
  std::string label_name(int label) const override { return labels_[label]; }
  double t_begin() const override { return t0_; }
  double t_end() const override { return t0_ + (frames_ - 1) * stride_; }
  double frame_stride() const override { return stride_; }
  double rate_cap() const override { return policy_.cap; }
  GuidanceEval evaluate(const double* x, double t, int label) const override;
  std::vector<RealField> label_densities(double t) const override;

  int frames() const { return frames_; }
  double time(int k) const { return t0_ + k * stride_; }
  double* density(int k, int c) { return slot(k, comp(c, 0)); }
  double* velocity_den(int k, int c) { return slot(k, comp(c, 1)); }
  double* velocity_num(int k, int c, int axis) { return slot(k, comp(c, 2 + axis)); }
  double* kappa(int k, int c) { return slot(k, comp(c, 2 + grid_.dim)); }
  double* gain_x(int k) { return slot(k, per_label() * label_count()); }
  double* gain_y(int k) { return slot(k, per_label() * label_count() + 1); }
  const double* density(int k, int c) const { return slot(k, comp(c, 0)); }
  const double* velocity_den(int k, int c) const { return slot(k, comp(c, 1)); }

  // Pointwise velocity and leaving rate at frame k; zero where the velocity
  // denominator is at or below mask.
  void frame_flow(int k, double mask, std::vector<std::array<RealField, 3>>& velocity,
                  std::vector<RealField>& rate) const;

  // Fix the node floor and rate cap once the tables are filled.
  void finalize(double mass);
  const NodePolicy& policy() const { return policy_; }

 private:
  int per_label() const { return 3 + grid_.dim; }
  int comp(int c, int s) const { return c * per_label() + s; }
  int components() const { return per_label() * label_count() + 2; }
  double* slot(int k, int c) { return data_.data() + (static_cast<std::size_t>(k) * components() + c) * grid_.cells(); }
  const double* slot(int k, int c) const {
    return data_.data() + (static_cast<std::size_t>(k) * components() + c) * grid_.cells();
  }

  Grid grid_;
  std::vector<std::string> labels_;
  double t0_, stride_;
  int frames_;
  std::vector<double> data_;
  NodePolicy policy_;
};

}  // namespace zigzag
