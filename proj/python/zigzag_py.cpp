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

// Python bindings for the spinor algebra, scenario runner and verify suites.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zigzag/ensemble.hpp"
#include "zigzag/guidance.hpp"
#include "zigzag/scenario.hpp"
#include "zigzag/verify.hpp"

namespace py = pybind11;
using namespace zigzag;

namespace {

Chirality parse_chirality(const std::string& c) {
  if (c == "R") return Chirality::R;
  if (c == "L") return Chirality::L;
  throw py::value_error("chirality must be 'R' or 'L'");
}

py::tuple velocity(const VelocityResult& r) { return py::make_tuple(r.v, r.degenerate); }

}  // namespace

PYBIND11_MODULE(_zigzag, m) {
  m.doc() = "Zig-zag guidance core";

  py::register_exception<Error>(m, "ZigzagError", PyExc_RuntimeError);

  m.def(
      "velocity_field",
      [](const Weyl& phi, const std::string& c, double floor) {
        return velocity(velocity_field(phi, parse_chirality(c), floor));
      },
      py::arg("phi"), py::arg("chirality"), py::arg("floor") = 0.0,
      "Luminal velocity of a Weyl spinor; returns (v, degenerate).");
  m.def(
      "jump_rates",
      [](const Weyl& r, const Weyl& l, double mass) {
        const auto p = jump_rates(r, l, mass);
        return py::make_tuple(p.t_LR, p.t_RL);
      },
      py::arg("phi_R"), py::arg("phi_L"), py::arg("mass"), "Minimal rates (t_LR, t_RL).");
  m.def("coupling_F", &coupling_F, py::arg("phi_R"), py::arg("phi_L"), py::arg("mass"));
  m.def(
      "bohm_velocity", [](const Dirac& psi) { return velocity(bohm_velocity(psi)); }, py::arg("psi"));
  m.def(
      "chiral_decompose",
      [](const Dirac& psi) {
        const auto p = chiral_decompose(psi);
        return py::make_tuple(p.right, p.left);
      },
      py::arg("psi"));
  m.def("default_bins", &default_bins, py::arg("n"));

  // JSON crosses the boundary as text; the package wrapper decodes it.
  m.def("config_hash", [](const std::string& text) { return parse_scenario(text).config_hash; }, py::arg("config"));
  m.def(
      "run_scenario_json",
      [](const std::string& text) {
        const Scenario s = parse_scenario(text);
        RunSummary r;
        {
          py::gil_scoped_release release;
          r = run_scenario(s);
        }
        nlohmann::json j{{"directory", r.directory}, {"artifacts", r.artifacts}, {"report", r.report}};
        return j.dump();
      },
      py::arg("config"));
  m.def("suite_names", &suite_names);
  m.def(
      "verify_json",
      [](const std::string& suite, int workers) {
        std::vector<SuiteResult> r;
        {
          py::gil_scoped_release release;
          r = run_verify(suite, workers);
        }
        return verify_json(r).dump();
      },
      py::arg("suite"), py::arg("workers") = 1);
}
