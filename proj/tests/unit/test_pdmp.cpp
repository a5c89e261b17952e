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

#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "zigzag/models.hpp"
#include "zigzag/wave_dynamics.hpp"

using namespace zigzag;

namespace {

// Two labels moving at +/-1 with a prescribed time-dependent flip rate.
class FlipModel : public GuidanceModel {
 public:
  FlipModel(double lambda, double wobble) : grid_(Grid::line(64, 100.0)), lambda_(lambda), wobble_(wobble) {}
  const Grid& grid() const override { return grid_; }
  int label_count() const override { return 2; }
  std::string label_name(int c) const override { return c == 0 ? "a" : "b"; }
  double t_begin() const override { return 0.0; }
  double t_end() const override { return 20.0; }
  double frame_stride() const override { return 0.1; }
  double rate_cap() const override { return 1e3; }
  double rate(double t) const { return lambda_ * (1.0 + wobble_ * std::sin(t)); }
  GuidanceEval evaluate(const double*, double t, int label) const override {
    GuidanceEval e;
    e.v[0] = label == 0 ? 1.0 : -1.0;
    e.channels = 1;
    e.jump[0] = {1 - label, rate(t)};
    return e;
  }
  std::vector<RealField> label_densities(double) const override { return {}; }

 private:
  Grid grid_;
  double lambda_, wobble_;
};

}  // namespace

TEST_CASE("jump counts follow the integrated rate", "[pdmp]") {
  const FlipModel model(0.8, 0.5);
  const double T = 10.0;
  // Oracle: Poisson mean = integral of the rate.
  const double mean = 0.8 * (T + 0.5 * (1.0 - std::cos(T)));
  const int n = 4000;
  double s = 0.0, s2 = 0.0;
  PdmpOptions opt;
  opt.keep_samples = false;
  // Back-and-forth flips inside one substep are lost, so a non-minimal rate needs a fine clock.
  opt.max_rate_step = 0.005;
  for (int i = 0; i < n; ++i) {
    const auto tr = sample_trajectory(model, ParticleState{{0, 0, 0}, 0, 0.0}, T, 99, i, opt);
    s += tr.jump_count;
    s2 += double(tr.jump_count) * tr.jump_count;
  }
  const double m = s / n, var = s2 / n - m * m;
  CHECK(std::abs(m - mean) < 4.0 * std::sqrt(mean / n));
  CHECK(std::abs(var / mean - 1.0) < 0.12);
}

TEST_CASE("trajectories are reproducible from seed and index", "[pdmp]") {
  const FlipModel model(1.5, 0.0);
  PdmpOptions opt;
  const auto a = sample_trajectory(model, ParticleState{{1, 0, 0}, 0, 0.0}, 5.0, 7, 3, opt);
  const auto b = sample_trajectory(model, ParticleState{{1, 0, 0}, 0, 0.0}, 5.0, 7, 3, opt);
  const auto c = sample_trajectory(model, ParticleState{{1, 0, 0}, 0, 0.0}, 5.0, 7, 4, opt);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) CHECK(a.events[i].t == b.events[i].t);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].x == b.samples[i].x);
  bool differs = a.events.size() != c.events.size();
  for (std::size_t i = 0; !differs && i < a.events.size(); ++i) differs = a.events[i].t != c.events[i].t;
  CHECK(differs);
}

TEST_CASE("massless packets give straight light-speed paths", "[pdmp]") {
  const Grid g = Grid::line(256, 40.0);
  auto rec = std::make_shared<WaveRecord>(
      evolve_1d(chiral_packets(g, {{0.0, 1.0, 0.3, 1.0, 0.6}}), 0.0, 4.0, 0.05));
  const DiracZigzagModel model(rec);
  PdmpOptions opt;
  for (int label : {0, 1}) {
    const auto tr = sample_trajectory(model, ParticleState{{0.4, 0, 0}, label, 0.0}, 4.0, 1, label, opt);
    CHECK(tr.jump_count == 0);
    const double dir = label == 0 ? 1.0 : -1.0;
    for (const auto& s : tr.samples) {
      CHECK(std::abs(s.x[0] - (0.4 + dir * s.t)) < 1e-9);
      CHECK(std::abs(s.v[0] - dir) < 1e-12);
    }
  }
}

TEST_CASE("rest eigenstate moves without jumping", "[pdmp]") {
  const Grid g = Grid::line(16, 10.0);
  auto rec = std::make_shared<WaveRecord>(evolve_1d(chiral_rest_superposition(g, 1.0, 0.0), 1.0, 3.0, 0.01));
  const DiracZigzagModel model(rec);
  PdmpOptions opt;
  const auto tr = sample_trajectory(model, ParticleState{{0.0, 0, 0}, 0, 0.0}, 3.0, 5, 0, opt);
  CHECK(tr.jump_count == 0);
  CHECK(std::abs(tr.samples.back().x[0] - g.wrap(0, 3.0)) < 1e-9);
}

TEST_CASE("rest superposition jump count matches the integrated coupling", "[pdmp]") {
  const double m = 1.0, T = 10.0;
  const Grid g = Grid::line(16, 10.0);
  const cplx a = 1.0 / std::sqrt(2.0);
  auto rec = std::make_shared<WaveRecord>(evolve_1d(chiral_rest_superposition(g, a, a), m, T, 0.01));
  const DiracZigzagModel model(rec);
  // Oracle: expected jumps = time integral of |F| for the unit-density spinor, by quadrature.
  double ref = 0.0;
  const int q = 200000;
  for (int i = 0; i < q; ++i) ref += std::abs(std::sin(2 * m * (i + 0.5) * T / q)) * m * T / q;
  REQUIRE(std::abs(ref - 6.29595) < 1e-4);
  PdmpOptions opt;
  opt.keep_samples = false;
  const int n = 2000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto tr = sample_trajectory(model, ParticleState{{0.0, 0, 0}, 0, 0.0}, T, 42, i, opt);
    s += tr.jump_count;
  }
  // The count is nearly deterministic (one jump per crossing); allow generous slack.
  CHECK(std::abs(s / n - ref) < 0.05);
}
