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

#include "zigzag/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "zigzag/error.hpp"
#include "zigzag/io.hpp"
#include "zigzag/models.hpp"

namespace zigzag {

namespace {

using nlohmann::json;

const std::set<std::string> kModels = {"dirac1d", "dirac3d",        "manybody",   "pauli_A",    "pauli_B",
                                       "nr_truncated", "nr_truncated_2", "spin_split", "reim_split", "bohm"};

// Strict view of one JSON object: every key must be consumed.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j.is_object(), ErrorKind::kInvalid, path_.empty() ? "config" : path_, "expected an object");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  const json& raw(const std::string& k) {
    used_.insert(k);
    return j_.at(k);
  }

  double number(const std::string& k, double def, bool required = false) {
    if (!has(k)) {
      require(!required, ErrorKind::kInvalid, field(k), "missing required key");
      return def;
    }
    const json& v = raw(k);
    require(v.is_number(), ErrorKind::kInvalid, field(k), "expected a number");
    const double d = v.get<double>();
    require(std::isfinite(d), ErrorKind::kInvalid, field(k), "expected a finite number");
    return d;
  }

  double positive(const std::string& k, double def, bool required = false) {
    const double d = number(k, def, required);
    require(d > 0, ErrorKind::kInvalid, field(k), "must be positive");
    return d;
  }

  std::uint64_t count(const std::string& k, std::uint64_t def, std::uint64_t lo = 0) {
    if (!has(k)) return def;
    const json& v = raw(k);
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0), ErrorKind::kInvalid,
            field(k), "expected a non-negative integer");
    const auto u = v.get<std::uint64_t>();
    require(u >= lo, ErrorKind::kInvalid, field(k), "must be at least " + std::to_string(lo));
    return u;
  }

  std::string string(const std::string& k, const std::string& def, bool required = false) {
    if (!has(k)) {
      require(!required, ErrorKind::kInvalid, field(k), "missing required key");
      return def;
    }
    const json& v = raw(k);
    require(v.is_string(), ErrorKind::kInvalid, field(k), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& k, bool def) {
    if (!has(k)) return def;
    const json& v = raw(k);
    require(v.is_boolean(), ErrorKind::kInvalid, field(k), "expected true or false");
    return v.get<bool>();
  }

  cplx complex(const std::string& k, cplx def) {
    if (!has(k)) return def;
    return to_complex(raw(k), field(k));
  }

  Vec3 vec3(const std::string& k, const Vec3& def) {
    if (!has(k)) return def;
    const json& v = raw(k);
    require(v.is_array() && v.size() == 3, ErrorKind::kInvalid, field(k), "expected [x, y, z]");
    Vec3 out;
    for (int a = 0; a < 3; ++a) {
      require(v[a].is_number(), ErrorKind::kInvalid, field(k), "expected numbers");
      out(a) = v[a].get<double>();
    }
    return out;
  }

  std::vector<cplx> complex_list(const std::string& k, std::size_t size, const std::vector<cplx>& def) {
    if (!has(k)) return def;
    const json& v = raw(k);
    require(v.is_array() && v.size() == size, ErrorKind::kInvalid, field(k),
            "expected " + std::to_string(size) + " complex entries");
    std::vector<cplx> out;
    for (const auto& e : v) out.push_back(to_complex(e, field(k)));
    return out;
  }

  std::vector<double> number_list(const std::string& k, const std::vector<double>& def) {
    if (!has(k)) return def;
    const json& v = raw(k);
    require(v.is_array(), ErrorKind::kInvalid, field(k), "expected a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      require(e.is_number(), ErrorKind::kInvalid, field(k), "expected a list of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Obj child(const std::string& k) { return Obj(raw(k), field(k)); }

  std::string field(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      require(used_.count(it.key()) > 0, ErrorKind::kInvalid, field(it.key()), "unknown key");
  }

 private:
  static cplx to_complex(const json& v, const std::string& f) {
    if (v.is_number()) return v.get<double>();
    require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(), ErrorKind::kInvalid, f,
            "expected a number or [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

PotentialSpec parse_potential(Obj o, const std::string& model) {
  PotentialSpec p;
  p.preset = o.string("preset", "none");
  if (p.preset == "uniform_b") {
    p.b = o.vec3("b", Vec3::Zero());
  } else if (p.preset == "linear_v") {
    p.field = o.number("field", 0.0);
  } else if (p.preset == "gaussian_bump") {
    p.height = o.number("height", 0.0);
    p.width = o.positive("width", 1.0);
    p.center = o.vec3("center", Vec3::Zero());
  } else if (p.preset == "periodic_a") {
    p.amplitude = o.number("amplitude", 0.0);
  } else {
    require(p.preset == "none", ErrorKind::kInvalid, o.field("preset"), "unknown potential preset '" + p.preset + "'");
  }
  o.finish();
  if (model == "reim_split")
    require(p.preset != "uniform_b" && p.preset != "periodic_a", ErrorKind::kInvalid, o.field("preset"),
            "the real/imaginary split needs a potential without magnetic field");
  return p;
}

void parse_initial(Obj o, Scenario& s) {
  InitialSpec& in = s.initial;
  const std::string& m = s.model;
  const bool chiral = m == "dirac1d" || (m == "bohm" && s.grid.dim == 1);
  const bool dirac3 = m == "dirac3d" || (m == "bohm" && s.grid.dim == 3);
  in.preset = o.string("preset", "", true);
  const std::string pf = o.field("preset");
  if (chiral && in.preset == "rest_superposition") {
    in.a = o.complex("a", 1.0 / std::sqrt(2.0));
    in.b = o.complex("b", 1.0 / std::sqrt(2.0));
  } else if (m == "manybody" && in.preset == "entangled") {
    EntangledSpec& e = in.entangled;
    e.center1 = o.number("center1", e.center1);
    e.center2 = o.number("center2", e.center2);
    e.width = o.positive("width", e.width);
    e.momentum1 = o.number("momentum1", e.momentum1);
    e.momentum2 = o.number("momentum2", e.momentum2);
    const auto amp = o.complex_list("amp", 4, {e.amp.begin(), e.amp.end()});
    std::copy(amp.begin(), amp.end(), e.amp.begin());
    const auto th = o.number_list("theta", {e.theta.begin(), e.theta.end()});
    require(th.size() == 4, ErrorKind::kInvalid, o.field("theta"), "expected 4 angles");
    std::copy(th.begin(), th.end(), e.theta.begin());
    in.antisymmetrize = o.boolean("antisymmetrize", false);
  } else if (in.preset == "packets" && (chiral || dirac3 || is_pauli_model(m))) {
    const json& list = o.raw("packets");
    const std::string lf = o.field("packets");
    require(list.is_array() && !list.empty(), ErrorKind::kInvalid, lf, "expected a non-empty list of packets");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Obj p(list[i], lf + "[" + std::to_string(i) + "]");
      if (chiral) {
        ChiralPacket c;
        c.center = p.number("center", 0.0);
        c.width = p.positive("width", 1.0);
        c.momentum = p.number("momentum", 0.0);
        c.amp_R = p.complex("amp_R", 1.0);
        c.amp_L = p.complex("amp_L", 0.0);
        in.chiral.push_back(c);
      } else if (dirac3) {
        DiracPacket d;
        d.center = p.vec3("center", Vec3::Zero());
        d.width = p.positive("width", 1.0);
        d.momentum = p.vec3("momentum", Vec3::Zero());
        const auto sp = p.complex_list("spinor", 4, {1.0, 0.0, 0.0, 0.0});
        for (int c = 0; c < 4; ++c) d.spinor(c) = sp[c];
        in.dirac.push_back(d);
      } else {
        PauliGaussian g;
        g.center = p.vec3("center", Vec3::Zero());
        g.width = p.positive("width", 1.0);
        g.momentum = p.vec3("momentum", Vec3::Zero());
        const auto sp = p.complex_list("spin", 2, {1.0, 0.0});
        g.spin = Weyl(sp[0], sp[1]);
        require(g.spin.norm() > 0, ErrorKind::kInvalid, p.field("spin"), "spin must be nonzero");
        in.pauli.push_back(g);
      }
      p.finish();
    }
    if (m == "spin_split") in.rotate_quarter_x = o.boolean("rotate_quarter_x", false);
    if (in.rotate_quarter_x)
      require(s.grid.dim == 2, ErrorKind::kInvalid, o.field("rotate_quarter_x"), "rotation needs a 2D grid");
  } else {
    throw Error(ErrorKind::kInvalid, pf, "preset '" + in.preset + "' is not available for model " + m);
  }
  o.finish();
}

void check_grid(const Scenario& s) {
  const int d = s.grid.dim;
  const std::string& m = s.model;
  bool ok = false;
  if (m == "dirac1d" || m == "manybody") ok = d == 1;
  else if (m == "dirac3d") ok = d == 3;
  else if (m == "bohm") ok = d == 1 || d == 3;
  else ok = d == 1 || d == 2;
  require(ok, ErrorKind::kInvalid, "grid.dim", "grid dimension " + std::to_string(d) + " is not supported by " + m);
}

std::string label_column(const Scenario& s) {
  if (s.model == "dirac1d" || s.model == "dirac3d" || s.model == "bohm") return "chirality";
  return "label";
}

// Physical column (0 = x, 1 = y, 2 = z) of grid axis a.
int column_of(const Scenario& s, const Grid& g, int a) { return is_pauli_model(s.model) ? physical_axis(g, a) : a; }

std::string safe_name(const std::string& label) {
  std::string out;
  for (char c : label) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

std::string density_table(const Grid& g, const RealField& f) {
  std::ostringstream os;
  if (g.dim == 1) {
    for (int i = 0; i < g.points[0]; ++i) os << fmt_double(g.coord(0, i)) << ' ' << fmt_double(f[i]) << '\n';
  } else {
    for (int i = 0; i < g.points[0]; ++i) {
      for (int j = 0; j < g.points[1]; ++j)
        os << fmt_double(g.coord(0, i)) << ' ' << fmt_double(g.coord(1, j)) << ' '
           << fmt_double(f[static_cast<std::size_t>(i) * g.points[1] + j]) << '\n';
      os << '\n';
    }
  }
  return os.str();
}

// Bin-averaged densities from bin masses.
std::string bin_table(const Grid& g, const std::vector<double>& mass, int bins, double total) {
  std::ostringstream os;
  double vol = 1.0;
  for (int a = 0; a < g.dim; ++a) vol *= g.extent[a] / bins;
  auto center = [&](int a, int b) { return -0.5 * g.extent[a] + (b + 0.5) * g.extent[a] / bins; };
  const double scale = total > 0 ? 1.0 / (total * vol) : 0.0;
  if (g.dim == 1) {
    for (int b = 0; b < bins; ++b) os << fmt_double(center(0, b)) << ' ' << fmt_double(mass[b] * scale) << '\n';
  } else {
    for (int b0 = 0; b0 < bins; ++b0) {
      for (int b1 = 0; b1 < bins; ++b1)
        os << fmt_double(center(0, b0)) << ' ' << fmt_double(center(1, b1)) << ' '
           << fmt_double(mass[static_cast<std::size_t>(b0) * bins + b1] * scale) << '\n';
      os << '\n';
    }
  }
  return os.str();
}

double sum_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

json diagnostics(const Scenario& s, const PreparedRun& run) {
  json d = json::object();
  const WaveRecord& rec = *run.record;
  d["record_frames"] = rec.frames;
  if (rec.kind == "dirac1d" || rec.kind == "dirac3d") {
    d["norm_final"] = record_norm(rec, rec.frames - 1);
    if (rec.kind == "dirac1d" && rec.frames >= 3) {
      const auto r = divergence_residual(rec, rec.mass);
      d["divergence_residual"] = {{"R", r.right}, {"L", r.left}};
    }
  } else if (rec.kind == "twoparticle") {
    const auto pops = sector_populations(rec, rec.frames - 1);
    d["sector_populations_final"] = std::vector<double>(pops.begin(), pops.end());
    d["max_speed_initial"] = max_speed_2p(rec, 0);
    if (s.initial.antisymmetrize) d["antisymmetry_residual"] = antisymmetry_residual(rec);
  } else if (rec.kind == "pauli") {
    d["norm_final"] = record_norm(rec, rec.frames - 1);
    const Potentials pot = record_potentials(rec);
    const PauliField f0 = pauli_frame(rec, pot, 0);
    if (s.model == "spin_split") {
      d["continuity_residual_initial"] = spin_split_continuity_residual(f0);
    } else if (s.model == "reim_split") {
      d["continuity_residual_initial"] =
          reim_split_continuity_residual(gauge_transform(scalar_from_pauli(f0), gauge_function(rec.grid, s.gauge)));
    } else if (!pot.zeeman_only) {
      d["identities_initial"] = identity_report(identity_residuals(f0), rec.grid, s.potential.preset);
    }
  }
  return d;
}

}  // namespace

Grid GridSpec::make() const {
  switch (dim) {
    case 1: return Grid::line(points, length);
    case 2: return Grid::square(points, length);
    case 3: return Grid::cube(points, length);
  }
  throw Error(ErrorKind::kInvalid, "grid.dim", "grid dimension must be 1, 2 or 3");
}

bool is_pauli_model(const std::string& m) {
  return m == "pauli_A" || m == "pauli_B" || m == "nr_truncated" || m == "nr_truncated_2" || m == "spin_split" ||
         m == "reim_split";
}

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kInvalid, "config", std::string("config is not valid JSON: ") + e.what());
  }
  Scenario s;
  s.source = root;
  s.config_hash = sha256_hex(text);
  Obj o(root, "");
  s.name = o.string("name", "", true);
  require(!s.name.empty(), ErrorKind::kInvalid, "name", "name must not be empty");
  s.model = o.string("model", "", true);
  require(kModels.count(s.model) > 0, ErrorKind::kInvalid, "model", "unknown model '" + s.model + "'");
  {
    Obj g = o.child("grid");
    s.grid.dim = static_cast<int>(g.count("dim", 1, 1));
    s.grid.points = static_cast<int>(g.count("points", 256, 2));
    s.grid.length = g.positive("length", 40.0);
    g.finish();
    require(s.grid.points % 2 == 0, ErrorKind::kInvalid, "grid.points", "points must be even");
  }
  check_grid(s);
  s.mass = o.number("mass", 1.0);
  if (is_pauli_model(s.model) || s.model == "manybody")
    require(s.mass > 0, ErrorKind::kInvalid, "mass", "mass must be positive");
  else
    require(s.mass >= 0, ErrorKind::kInvalid, "mass", "mass must be non-negative");
  if (is_pauli_model(s.model)) {
    s.charge = o.number("charge", 1.0);
    if (o.has("potential")) s.potential = parse_potential(o.child("potential"), s.model);
  }
  if (s.model == "reim_split" && o.has("gauge")) {
    Obj g = o.child("gauge");
    s.gauge.amplitude = g.number("amplitude", 0.0);
    s.gauge.offset = g.number("offset", 0.0);
    g.finish();
  }
  parse_initial(o.child("initial"), s);
  s.t_final = o.positive("t_final", 1.0, true);
  s.dt = o.positive("dt", 0.01, true);
  const double steps = s.t_final / s.dt;
  require(std::abs(steps - std::round(steps)) < 1e-9 * std::max(1.0, steps), ErrorKind::kInvalid, "dt",
          "t_final must be a whole number of steps");
  s.trajectories = o.count("trajectories", 1000, 1);
  s.seed = o.count("seed", 1);
  s.checkpoints = o.number_list("checkpoints", {0.0, s.t_final});
  require(!s.checkpoints.empty(), ErrorKind::kInvalid, "checkpoints", "at least one checkpoint is needed");
  for (double t : s.checkpoints) {
    const double k = t / s.dt;
    require(t >= 0 && t <= s.t_final + 1e-12, ErrorKind::kInvalid, "checkpoints", "checkpoint outside [0, t_final]");
    require(std::abs(k - std::round(k)) < 1e-9 * std::max(1.0, k), ErrorKind::kInvalid, "checkpoints",
            "checkpoints must be multiples of dt");
  }
  require(std::is_sorted(s.checkpoints.begin(), s.checkpoints.end()), ErrorKind::kInvalid, "checkpoints",
          "checkpoints must be increasing");
  s.output_dir = o.string("output_dir", s.name);
  require(!s.output_dir.empty(), ErrorKind::kInvalid, "output_dir", "output_dir must not be empty");
  s.workers = static_cast<int>(o.count("workers", 1, 1));
  s.keep_trajectories = o.count("keep_trajectories", 10);
  s.sample_interval = o.number("sample_interval", 0.0);
  require(s.sample_interval >= 0, ErrorKind::kInvalid, "sample_interval", "must be non-negative");
  s.max_rate_step = o.positive("max_rate_step", 0.1);
  s.memory_cap_mb = o.count("memory_cap_mb", 2048, 1);
  s.write_record = o.boolean("write_record", true);
  o.finish();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kIo, "config", "cannot read " + path + ": " + e.what());
  }
  return parse_scenario(text);
}

PreparedRun prepare(const Scenario& s) {
  const Grid grid = s.grid.make();
  const std::size_t cap = s.memory_cap_mb << 20;
  PreparedRun run;
  const std::string& m = s.model;
  if (m == "dirac1d" || (m == "bohm" && grid.dim == 1)) {
    const ChiralField1D init = s.initial.preset == "rest_superposition"
                                   ? chiral_rest_superposition(grid, s.initial.a, s.initial.b)
                                   : chiral_packets(grid, s.initial.chiral);
    run.record = std::make_shared<WaveRecord>(evolve_1d(init, s.mass, s.t_final, s.dt, cap));
  } else if (m == "dirac3d" || m == "bohm") {
    run.record = std::make_shared<WaveRecord>(evolve_3d(dirac_packets(grid, s.initial.dirac), s.mass, s.t_final, s.dt, cap));
  } else if (m == "manybody") {
    SectorField2P init = entangled_packets(grid, s.initial.entangled);
    if (s.initial.antisymmetrize) {
      init = antisymmetrize(init);
      normalize(init);
    }
    run.record = std::make_shared<WaveRecord>(evolve_2p(init, s.mass, s.t_final, s.dt, cap));
  } else {
    PauliField f;
    f.grid = grid;
    f.mass = s.mass;
    f.charge = s.charge;
    f.pot = make_potentials(grid, s.potential);
    f.phi = pauli_packets(grid, s.initial.pauli);
    if (s.initial.rotate_quarter_x) f.phi = rotate_quarter_x(grid, f.phi);
    run.record = std::make_shared<WaveRecord>(pauli_evolve(f, s.t_final, s.dt, cap));
  }

  if (m == "dirac1d" || m == "dirac3d") {
    run.model = std::make_shared<DiracZigzagModel>(run.record);
  } else if (m == "bohm") {
    run.model = std::make_shared<BohmModel>(run.record);
  } else if (m == "manybody") {
    run.model = std::make_shared<TwoParticleModel>(run.record);
  } else if (m == "spin_split") {
    run.model = build_spin_split_model(*run.record, 1, cap);
  } else if (m == "reim_split") {
    run.model = build_reim_split_model(*run.record, s.gauge, 1, cap);
  } else {
    run.model = build_nr_model(*run.record, nr_model_from_string(m), 1, cap);
  }
  return run;
}

std::string output_path(const Scenario& s) {
  namespace fs = std::filesystem;
  const char* env = std::getenv("ZIGZAG_OUTPUT_ROOT");
  const fs::path root = env && *env ? fs::path(env) : fs::current_path();
  const fs::path dir(s.output_dir);
  return (root / (dir.is_absolute() ? dir.relative_path() : dir)).lexically_normal().string();
}

std::string trajectories_csv(const Scenario& s, const GuidanceModel& model, const std::vector<Trajectory>& kept) {
  std::ostringstream os;
  const Grid& g = model.grid();
  if (s.model == "manybody") {
    os << "traj_id,t,z1,z2,c1,c2,v1,v2\n";
    for (const auto& tr : kept)
      for (const auto& p : tr.samples)
        os << tr.index << ',' << fmt_double(p.t) << ',' << fmt_double(p.x[0]) << ',' << fmt_double(p.x[1]) << ','
           << (sector_chirality(p.label, 0) == 0 ? 'R' : 'L') << ',' << (sector_chirality(p.label, 1) == 0 ? 'R' : 'L')
           << ',' << fmt_double(p.v[0]) << ',' << fmt_double(p.v[1]) << '\n';
    return os.str();
  }
  os << "traj_id,t,x,y,z," << label_column(s) << ",vx,vy,vz\n";
  for (const auto& tr : kept)
    for (const auto& p : tr.samples) {
      double x[3] = {0, 0, 0}, v[3] = {0, 0, 0};
      for (int a = 0; a < g.dim; ++a) {
        x[column_of(s, g, a)] = p.x[a];
        v[column_of(s, g, a)] = p.v[a];
      }
      os << tr.index << ',' << fmt_double(p.t);
      for (double c : x) os << ',' << fmt_double(c);
      os << ',' << model.label_name(p.label);
      for (double c : v) os << ',' << fmt_double(c);
      os << '\n';
    }
  return os.str();
}

std::string events_csv(const Scenario& s, const GuidanceModel& model, const std::vector<Trajectory>& kept) {
  std::ostringstream os;
  const Grid& g = model.grid();
  if (s.model == "manybody") {
    os << "traj_id,t,z1,z2,from,to\n";
    for (const auto& tr : kept)
      for (const auto& e : tr.events)
        os << tr.index << ',' << fmt_double(e.t) << ',' << fmt_double(e.x[0]) << ',' << fmt_double(e.x[1]) << ','
           << model.label_name(e.from) << ',' << model.label_name(e.to) << '\n';
    return os.str();
  }
  os << "traj_id,t,x,y,z,from,to\n";
  for (const auto& tr : kept)
    for (const auto& e : tr.events) {
      double x[3] = {0, 0, 0};
      for (int a = 0; a < g.dim; ++a) x[column_of(s, g, a)] = e.x[a];
      os << tr.index << ',' << fmt_double(e.t);
      for (double c : x) os << ',' << fmt_double(c);
      os << ',' << model.label_name(e.from) << ',' << model.label_name(e.to) << '\n';
    }
  return os.str();
}

std::string record_csv(const WaveRecord& rec) {
  std::ostringstream os;
  const Grid& g = rec.grid;
  os << "frame,t,cell";
  const char* axes[3] = {"x0", "x1", "x2"};
  for (int a = 0; a < g.dim; ++a) os << ',' << axes[a];
  for (const auto& c : rec.component_names) os << ',' << c << "_re," << c << "_im";
  os << '\n';
  for (int k = 0; k < rec.frames; ++k)
    for (std::size_t q = 0; q < g.cells(); ++q) {
      os << k << ',' << fmt_double(rec.time(k)) << ',' << q;
      std::size_t rem = q;
      int idx[3] = {0, 0, 0};
      for (int a = g.dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(rem % g.points[a]);
        rem /= g.points[a];
      }
      for (int a = 0; a < g.dim; ++a) os << ',' << fmt_double(g.coord(a, idx[a]));
      for (int c = 0; c < rec.components; ++c) {
        const cplx v = rec.component(k, c)[q];
        os << ',' << fmt_double(v.real()) << ',' << fmt_double(v.imag());
      }
      os << '\n';
    }
  return os.str();
}

json error_json(ErrorKind kind, const std::string& field, const std::string& message) {
  const char* name = "invalid";
  switch (kind) {
    case ErrorKind::kInvalid: name = "invalid"; break;
    case ErrorKind::kResource: name = "resource"; break;
    case ErrorKind::kNumerical: name = "numerical"; break;
    case ErrorKind::kIo: name = "io"; break;
  }
  return {{"error", name}, {"exit_code", static_cast<int>(kind)}, {"field", field}, {"message", message}};
}

RunSummary run_scenario(const Scenario& s) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();
  RunSummary out;
  out.directory = output_path(s);
  const PreparedRun run = prepare(s);
  const GuidanceModel& model = *run.model;

  EnsembleOptions o;
  o.n = s.trajectories;
  o.seed = s.seed;
  o.checkpoints = s.checkpoints;
  o.workers = s.workers;
  o.keep = std::min(s.keep_trajectories, s.trajectories);
  o.pdmp.output_stride = s.sample_interval;
  o.pdmp.max_rate_step = s.max_rate_step;
  EnsembleRun ens = equivariance_test(model, o);
  ens.report.scenario = s.name;

  auto emit = [&](const std::string& name, const std::string& content) {
    atomic_write((fs::path(out.directory) / name).string(), content);
    out.artifacts.push_back(name);
  };

  if (s.write_record) {
    write_record(*run.record, (fs::path(out.directory) / "record").string());
    out.artifacts.push_back("record.bin");
    out.artifacts.push_back("record.json");
  }
  emit("trajectories.csv", trajectories_csv(s, model, ens.kept));
  emit("events.csv", events_csv(s, model, ens.kept));

  const Grid& g = model.grid();
  if (g.dim <= 2) {
    for (std::size_t k = 0; k < s.checkpoints.size(); ++k) {
      const double t = s.checkpoints[k];
      const auto dens = model.label_densities(t);
      RealField total(g.cells(), 0.0);
      std::vector<std::vector<Point>> pos(model.label_count());
      std::vector<Point> all;
      for (const auto& st : ens.states[k]) {
        pos[st.label].push_back(st.x);
        all.push_back(st.x);
      }
      const std::string tag = std::to_string(k);
      const int bins = ens.report.bins;
      double target_total = 0.0;
      for (int c = 0; c < model.label_count(); ++c) {
        for (std::size_t q = 0; q < total.size(); ++q) total[q] += dens[c][q];
        const std::string lab = safe_name(model.label_name(c));
        emit("density_" + lab + "_" + tag + ".dat", density_table(g, dens[c]));
        emit("hist_" + lab + "_" + tag + ".dat", bin_table(g, histogram(g, pos[c], bins), bins, double(all.size())));
        const auto target = bin_masses(g, dens[c], bins);
        target_total += sum_of(target);
      }
      for (int c = 0; c < model.label_count(); ++c) {
        const std::string lab = safe_name(model.label_name(c));
        emit("hist_target_" + lab + "_" + tag + ".dat",
             bin_table(g, bin_masses(g, dens[c], bins), bins, target_total));
      }
      emit("density_total_" + tag + ".dat", density_table(g, total));
      emit("hist_total_" + tag + ".dat", bin_table(g, histogram(g, all, bins), bins, double(all.size())));
      emit("hist_target_total_" + tag + ".dat", bin_table(g, bin_masses(g, total, bins), bins, target_total));
    }
  }

  json report = report_json(ens.report);
  report["model"] = s.model;
  report["config_hash"] = s.config_hash;
  report["config"] = s.source;
  report["grid"] = {{"dim", s.grid.dim}, {"points", s.grid.points}, {"length", s.grid.length}};
  report["diagnostics"] = diagnostics(s, run);
  std::vector<std::string> listed = out.artifacts;
  listed.push_back("report.json");
  report["artifacts"] = listed;
  emit("report.json", report.dump(2) + "\n");
  out.report = report;

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "zigzag: " << s.name << " finished in " << fmt_double(std::round(secs * 100) / 100) << " s, "
            << out.artifacts.size() << " files in " << out.directory << "\n";
  return out;
}

}  // namespace zigzag
