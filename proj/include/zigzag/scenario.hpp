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

// Scenario files: one JSON object per run, strict schema (unknown keys are
// errors). See README.md for the key reference.

#include <cstdint>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "zigzag/ensemble.hpp"
#include "zigzag/error.hpp"
#include "zigzag/manybody.hpp"
#include "zigzag/nonrel.hpp"
#include "zigzag/variations.hpp"
#include "zigzag/wave_dynamics.hpp"

namespace zigzag {

struct GridSpec {
  int dim = 1;
  int points = 256;
  double length = 40.0;
  Grid make() const;
};

struct InitialSpec {
  std::string preset;
  cplx a = 1.0, b = 0.0;  // rest_superposition
  std::vector<ChiralPacket> chiral;
  std::vector<DiracPacket> dirac;
  EntangledSpec entangled;
  bool antisymmetrize = false;
  std::vector<PauliGaussian> pauli;
  bool rotate_quarter_x = false;
};

struct Scenario {
  std::string name;
  std::string model;  // dirac1d dirac3d manybody pauli_A pauli_B nr_truncated nr_truncated_2 spin_split reim_split bohm
  GridSpec grid;
  double mass = 1.0;
  double charge = 1.0;
  PotentialSpec potential;
  GaugeSpec gauge;
  InitialSpec initial;
  double t_final = 1.0;
  double dt = 0.01;
  std::size_t trajectories = 1000;
  std::uint64_t seed = 1;
  std::vector<double> checkpoints;
  std::string output_dir;
  int workers = 1;
  std::size_t keep_trajectories = 10;
  double sample_interval = 0.0;  // 0: every step
  double max_rate_step = 0.1;
  std::size_t memory_cap_mb = 2048;
  bool write_record = true;

  std::string config_hash;  // SHA-256 of the config file bytes
  nlohmann::json source;    // the parsed config
};

// Throws Error(kInvalid, field, ...) on any schema violation.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

bool is_pauli_model(const std::string& model);

// Wave function and guidance model of a scenario.
struct PreparedRun {
  std::shared_ptr<WaveRecord> record;
  std::shared_ptr<GuidanceModel> model;
};
PreparedRun prepare(const Scenario& s);

// Output directory of a scenario: $ZIGZAG_OUTPUT_ROOT (or the working
// directory) joined with output_dir.
std::string output_path(const Scenario& s);

struct RunSummary {
  std::string directory;
  std::vector<std::string> artifacts;
  nlohmann::json report;
};

// Run the scenario and write all artifacts atomically.
RunSummary run_scenario(const Scenario& s);

// Trajectory and event CSVs in the documented schemas.
std::string trajectories_csv(const Scenario& s, const GuidanceModel& model, const std::vector<Trajectory>& kept);
std::string events_csv(const Scenario& s, const GuidanceModel& model, const std::vector<Trajectory>& kept);

// Record export: frame,t,cell,coordinates,then re/im per component.
std::string record_csv(const WaveRecord& rec);

// Machine-readable error object.
nlohmann::json error_json(ErrorKind kind, const std::string& field, const std::string& message);

}  // namespace zigzag
