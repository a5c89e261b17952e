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

// zigzag: run scenarios, verification suites and record exports.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <new>
#include <optional>

#include "zigzag/error.hpp"
#include "zigzag/io.hpp"
#include "zigzag/scenario.hpp"
#include "zigzag/verify.hpp"
#include "zigzag/wave_record.hpp"

namespace fs = std::filesystem;
using namespace zigzag;

namespace {

int fail(ErrorKind kind, const std::string& field, const std::string& message,
         const std::optional<std::string>& dir = std::nullopt) {
  const auto j = error_json(kind, field, message);
  std::cout << j.dump(2) << "\n";
  if (dir) {
    try {
      atomic_write((fs::path(*dir) / "error.json").string(), j.dump(2) + "\n");
    } catch (const std::exception&) {
      // stdout already carries the error
    }
  }
  return static_cast<int>(kind);
}

// Runs body and maps every failure to an exit code and error JSON.
template <class F>
int guarded(F&& body, std::optional<std::string>& dir) {
  try {
    return body();
  } catch (const Error& e) {
    return fail(e.kind(), e.field(), e.what(), dir);
  } catch (const nlohmann::json::exception& e) {
    return fail(ErrorKind::kInvalid, "config", e.what(), dir);
  } catch (const std::bad_alloc&) {
    return fail(ErrorKind::kResource, "memory", "allocation failed", dir);
  } catch (const std::exception& e) {
    return fail(ErrorKind::kNumerical, "", e.what(), dir);
  }
}

int cmd_run(const std::string& cfg, int workers) {
  std::optional<std::string> dir;
  return guarded(
      [&] {
        Scenario s = load_scenario(cfg);
        if (workers > 0) s.workers = workers;
        dir = output_path(s);
        const RunSummary r = run_scenario(s);
        nlohmann::json out = {{"status", "ok"},
                              {"scenario", s.name},
                              {"config_hash", s.config_hash},
                              {"seed", s.seed},
                              {"directory", r.directory},
                              {"artifacts", r.artifacts}};
        std::cout << out.dump(2) << "\n";
        return 0;
      },
      dir);
}

int cmd_verify(const std::string& suite, int workers, const std::string& out) {
  std::optional<std::string> dir;
  return guarded(
      [&] {
        const auto results = run_verify(suite, workers > 0 ? workers : 1);
        for (const auto& r : results)
          std::cerr << "zigzag: suite " << r.suite << (r.pass() ? " passed" : " FAILED") << " in "
                    << fmt_double(std::round(r.seconds * 10) / 10) << " s\n";
        const auto j = verify_json(results);
        const std::string text = j.dump(2) + "\n";
        if (!out.empty()) atomic_write(out, text);
        std::cout << text;
        return j["pass"].get<bool>() ? 0 : 1;
      },
      dir);
}

int cmd_export(const std::string& base, const std::string& format, std::string out) {
  std::optional<std::string> dir;
  return guarded(
      [&] {
        const WaveRecord rec = read_record(base);
        if (format == "csv") {
          if (out.empty()) out = base + ".csv";
          atomic_write(out, record_csv(rec));
        } else {
          if (out.empty()) out = base + "_export";
          write_record(rec, out);
        }
        std::cout << nlohmann::json{{"status", "ok"}, {"format", format}, {"output", out}}.dump(2) << "\n";
        return 0;
      },
      dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zig-zag pilot-wave simulations"};
  app.require_subcommand(1);
  int workers = 0;

  std::string cfg;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", cfg, "scenario file (JSON)")->required();
  run->add_option("--workers", workers, "override the config's worker count");

  std::string suite, verify_out;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "algebra | dynamics | equivariance | nonrel | variations | manybody | all")
      ->required();
  verify->add_option("--out", verify_out, "also write the JSON summary here");
  verify->add_option("--workers", workers, "worker threads for ensemble runs");

  std::string base, format, export_out;
  auto* exp = app.add_subcommand("export", "convert a stored wave record");
  exp->add_option("record", base, "record base path (without .bin/.json)")->required();
  exp->add_option("--format", format, "csv | binary")->required()->check(CLI::IsMember({"csv", "binary"}));
  exp->add_option("--out", export_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json(ErrorKind::kInvalid, "arguments", e.what()).dump(2) << "\n";
    return static_cast<int>(ErrorKind::kInvalid);
  }
  if (*run) return cmd_run(cfg, workers);
  if (*verify) return cmd_verify(suite, workers, verify_out);
  return cmd_export(base, format, export_out);
}
