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

#include "zigzag/nonrel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zigzag/ensemble.hpp"
#include "zigzag/error.hpp"

namespace zigzag {

namespace {

const cplx I(0.0, 1.0);

double sgn(int c) { return c == 0 ? 1.0 : -1.0; }

cplx inner(const Spinor2Field& a, const Spinor2Field& b, std::size_t q) {
  return std::conj(a[0][q]) * b[0][q] + std::conj(a[1][q]) * b[1][q];
}

// Components of a^dag sigma b at q.
std::array<cplx, 3> sigma_inner(const Spinor2Field& a, const Spinor2Field& b, std::size_t q) {
  const cplx a0 = std::conj(a[0][q]), a1 = std::conj(a[1][q]);
  return {a0 * b[1][q] + a1 * b[0][q], -I * a0 * b[1][q] + I * a1 * b[0][q], a0 * b[0][q] - a1 * b[1][q]};
}

Vec3Field zeros3(std::size_t n) { return {RealField(n, 0.0), RealField(n, 0.0), RealField(n, 0.0)}; }

double field_max(const RealField& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, v);
  return m;
}

}  // namespace

const std::array<const char*, IdentityResiduals::kCount> IdentityResiduals::names = {
    "divergence_order0", "continuity_order1", "continuity_order2", "null_order0", "null_order1", "null_order2"};

CurrentExpansion expand_currents(const PauliField& f) {
  const PauliOps ops(f.grid, f.pot, f.mass, f.charge);
  const std::size_t n = f.grid.cells();
  const double m = f.mass, e = f.charge;
  const Spinor2Field& phi = f.phi;
  std::array<Spinor2Field, 3> Dphi{ops.D(phi, 0), ops.D(phi, 1), ops.D(phi, 2)};
  const Spinor2Field S = ops.sigma_dot_D(phi);
  const Spinor2Field S3 = ops.sigma_dot_D(ops.sigma_dot_D(S));

  CurrentExpansion ex;
  ex.grid = f.grid;
  ex.density.resize(n);
  ex.spin = zeros3(n);
  ex.pauli_current = zeros3(n);
  for (auto& F : ex.F) F.assign(n, 0.0);
  Vec3Field imD = zeros3(n);
  RealField imS(n), s2(n);
  Vec3Field sSs = zeros3(n);
  for (std::size_t q = 0; q < n; ++q) {
    ex.density[q] = inner(phi, phi, q).real();
    const auto sp = sigma_inner(phi, phi, q);
    const auto ss = sigma_inner(S, S, q);
    for (int a = 0; a < 3; ++a) {
      ex.spin[a][q] = sp[a].real();
      imD[a][q] = inner(phi, Dphi[a], q).imag();
      sSs[a][q] = ss[a].real();
    }
    const cplx pS = inner(phi, S, q);
    imS[q] = pS.imag();
    ex.F[1][q] = pS.real();
    s2[q] = inner(S, S, q).real();
    double Es = 0.0;
    for (int a = 0; a < 3; ++a) Es += f.pot.E[a][q] * ex.spin[a][q];
    ex.F[3][q] = inner(phi, S3, q).real() / (4 * m * m) + e / (2 * m) * Es;
  }
  const Vec3Field curl = ops.curl(ex.spin);
  ex.F1_divergence = ops.div(ex.spin);
  for (auto& v : ex.F1_divergence) v *= 0.5;
  for (int c = 0; c < 2; ++c) {
    const double s = sgn(c);
    for (auto& o : ex.j0[c]) o.resize(n);
    for (auto& o : ex.j[c]) o = zeros3(n);
    for (std::size_t q = 0; q < n; ++q) {
      ex.j0[c][0][q] = 0.5 * ex.density[q];
      ex.j0[c][1][q] = s * imS[q] / (2 * m);
      ex.j0[c][2][q] = s2[q] / (8 * m * m);
      for (int a = 0; a < 3; ++a) {
        ex.j[c][0][a][q] = s * 0.5 * ex.spin[a][q];
        ex.j[c][1][a][q] = imD[a][q] / (2 * m) + curl[a][q] / (4 * m);
        ex.j[c][2][a][q] = s * sSs[a][q] / (8 * m * m);
      }
    }
  }
  for (int a = 0; a < 3; ++a)
    for (std::size_t q = 0; q < n; ++q) ex.pauli_current[a][q] = imD[a][q] / m + curl[a][q] / (2 * m);
  return ex;
}

IdentityResiduals identity_residuals(const PauliField& f) {
  const PauliOps ops(f.grid, f.pot, f.mass, f.charge);
  const std::size_t n = f.grid.cells();
  const double m = f.mass;
  const CurrentExpansion ex = expand_currents(f);
  Spinor2Field dt = ops.hamiltonian(f.phi);
  for (auto& c : dt)
    for (auto& v : c) v *= -I;
  const Spinor2Field S = ops.sigma_dot_D(f.phi);
  const Spinor2Field SdT = ops.sigma_dot_D(dt);

  IdentityResiduals r;
  auto record = [&](int k, double v, std::size_t count) {
    r.max[k] = std::max(r.max[k], std::abs(v));
    r.mean[k] += std::abs(v) / static_cast<double>(count);
  };
  for (int c = 0; c < 2; ++c) {
    const double s = sgn(c);
    const RealField d0 = ops.div(ex.j[c][0]), d1 = ops.div(ex.j[c][1]), d2 = ops.div(ex.j[c][2]);
    for (std::size_t q = 0; q < n; ++q) {
      const double dt_j00 = inner(f.phi, dt, q).real();
      const double dt_j01 = s * (inner(dt, S, q) + inner(f.phi, SdT, q)).imag() / (2 * m);
      record(0, d0[q] - s * ex.F[1][q], 2 * n);
      record(1, dt_j00 + d1[q], 2 * n);
      record(2, dt_j01 + d2[q] - s * ex.F[3][q], 2 * n);
      double n0 = 0, n1 = 0, n2a = 0, n2b = 0;
      for (int a = 0; a < 3; ++a) {
        n0 += ex.j[c][0][a][q] * ex.j[c][0][a][q];
        n1 += ex.j[c][0][a][q] * ex.j[c][1][a][q];
        n2a += ex.j[c][1][a][q] * ex.j[c][1][a][q];
        n2b += ex.j[c][0][a][q] * ex.j[c][2][a][q];
      }
      const double j00 = ex.j0[c][0][q], j01 = ex.j0[c][1][q], j02 = ex.j0[c][2][q];
      record(3, j00 * j00 - n0, 2 * n);
      record(4, j00 * j01 - n1, 2 * n);
      record(5, j01 * j01 + 2 * j00 * j02 - n2a - 2 * n2b, 2 * n);
    }
  }
  return r;
}

nlohmann::json identity_report(const IdentityResiduals& r, const Grid& grid, const std::string& preset) {
  nlohmann::json j;
  j["grid"] = {{"dim", grid.dim},
               {"points", std::vector<int>(grid.points.begin(), grid.points.begin() + grid.dim)},
               {"extent", std::vector<double>(grid.extent.begin(), grid.extent.begin() + grid.dim)}};
  j["preset"] = preset;
  for (int k = 0; k < IdentityResiduals::kCount; ++k)
    j["identities"][IdentityResiduals::names[k]] = {{"max", r.max[k]}, {"mean", r.mean[k]}};
  return j;
}

NRModel nr_model_from_string(const std::string& s) {
  if (s == "pauli_A") return NRModel::kPauliA;
  if (s == "pauli_B") return NRModel::kPauliB;
  if (s == "nr_truncated" || s == "nr_truncated_1") return NRModel::kTruncated1;
  if (s == "nr_truncated_2") return NRModel::kTruncated2;
  throw Error(ErrorKind::kInvalid, "model", "unknown non-relativistic model '" + s + "'");
}

const char* nr_model_name(NRModel m) {
  switch (m) {
    case NRModel::kPauliA: return "pauli_A";
    case NRModel::kPauliB: return "pauli_B";
    case NRModel::kTruncated1: return "nr_truncated_1";
    case NRModel::kTruncated2: return "nr_truncated_2";
  }
  return "";
}

NRGuidance nr_guidance(const CurrentExpansion& ex, NRModel model, double mask) {
  const std::size_t n = ex.density.size();
  const double cut = mask * field_max(ex.density);
  NRGuidance g;
  g.gain_x.assign(n, 0.0);
  g.gain_y.assign(n, 0.0);
  for (int c = 0; c < 2; ++c) {
    g.density[c].assign(n, 0.0);
    g.velocity_den[c].assign(n, 0.0);
    g.velocity_num[c] = zeros3(n);
    g.kappa[c].assign(n, 0.0);
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (!(ex.density[q] > cut)) continue;
    const double F1 = ex.F[1][q], F3 = ex.F[3][q];
    switch (model) {
      case NRModel::kPauliA: g.gain_x[q] = F1 + F3; break;
      case NRModel::kPauliB: g.gain_x[q] = F1; break;
      case NRModel::kTruncated1: g.gain_x[q] = F1; g.gain_y[q] = F1; break;
      case NRModel::kTruncated2: g.gain_x[q] = F1 + F3; g.gain_y[q] = F1; break;
    }
    for (int c = 0; c < 2; ++c) {
      const double j00 = ex.j0[c][0][q], j01 = ex.j0[c][1][q], j02 = ex.j0[c][2][q];
      const double r = j01 / j00;
      for (int a = 0; a < 3; ++a) {
        const double o0 = ex.j[c][0][a][q], o1 = ex.j[c][1][a][q], o2 = ex.j[c][2][a][q];
        double v = 0.0;
        switch (model) {
          case NRModel::kPauliA: v = o0 + o1 + o2; break;
          case NRModel::kPauliB: v = o0 + o1; break;
          case NRModel::kTruncated1: v = o0 + o1 - r * o0; break;
          case NRModel::kTruncated2: v = o0 + o1 + o2 - r * (o0 + o1) + (r * r - j02 / j00) * o0; break;
        }
        g.velocity_num[c][a][q] = v;
      }
      switch (model) {
        case NRModel::kPauliA:
          g.density[c][q] = g.velocity_den[c][q] = j00 + j01;
          break;
        case NRModel::kPauliB:
          g.density[c][q] = g.velocity_den[c][q] = j00;
          break;
        case NRModel::kTruncated1:
          g.density[c][q] = j00 + j01;
          g.velocity_den[c][q] = j00;
          g.kappa[c][q] = -r;
          break;
        case NRModel::kTruncated2:
          g.density[c][q] = j00 + j01;
          g.velocity_den[c][q] = j00;
          g.kappa[c][q] = r * r - (j01 + j02) / j00;
          break;
      }
    }
  }
  return g;
}

Vec3Field nr_velocity(const NRGuidance& g, int c) {
  const std::size_t n = g.gain_x.size();
  Vec3Field v = zeros3(n);
  for (std::size_t q = 0; q < n; ++q) {
    const double d = g.velocity_den[c][q];
    if (d > 0)
      for (int a = 0; a < 3; ++a) v[a][q] = g.velocity_num[c][a][q] / d;
  }
  return v;
}

RealField nr_rate(const NRGuidance& g, int c) {
  const std::size_t n = g.gain_x.size();
  const double sigma = c == 0 ? -1.0 : 1.0;
  RealField r(n, 0.0);
  for (std::size_t q = 0; q < n; ++q) {
    const double d = g.velocity_den[c][q];
    if (!(d > 0)) continue;
    const double num = std::max(0.0, std::max(sigma * g.gain_x[q], 0.0) + g.kappa[c][q] * std::max(sigma * g.gain_y[q], 0.0));
    r[q] = num / d;
  }
  return r;
}

void check_positive_density(const NRGuidance& g, const CurrentExpansion& ex) {
  const double cut = 1e-8 * field_max(ex.density);
  const Grid& grid = ex.grid;
  for (int c = 0; c < 2; ++c) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool bad = false;
    for (std::size_t q = 0; q < ex.density.size(); ++q) {
      if (!(ex.density[q] > cut) || g.density[c][q] > 0) continue;
      bad = true;
      const int i0 = static_cast<int>(q / (grid.cells() / grid.points[0]));
      lo = std::min(lo, grid.coord(0, i0));
      hi = std::max(hi, grid.coord(0, i0));
    }
    const char* axis = physical_axis(grid, 0) == 1 ? "y" : "z";
    require(!bad, ErrorKind::kNumerical, "model",
            std::string("model-A equilibrium density for ") + (c == 0 ? "R" : "L") + " is not positive for " + axis +
                " in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

std::shared_ptr<TabulatedModel> build_nr_model(const WaveRecord& pauli, NRModel model, int frame_step,
                                               std::size_t cap_bytes) {
  require(pauli.kind == "pauli", ErrorKind::kInvalid, "record", "non-relativistic models need a Pauli record");
  require(frame_step >= 1, ErrorKind::kInvalid, "output_stride", "frame step must be positive");
  const Potentials pot = record_potentials(pauli);
  const int frames = (pauli.frames - 1) / frame_step + 1;
  auto tm = std::make_shared<TabulatedModel>(pauli.grid, std::vector<std::string>{"R", "L"}, pauli.t0,
                                             pauli.stride * frame_step, frames, cap_bytes);
  for (int k = 0; k < frames; ++k) {
    const CurrentExpansion ex = expand_currents(pauli_frame(pauli, pot, k * frame_step));
    const NRGuidance g = nr_guidance(ex, model);
    if (model == NRModel::kPauliA) check_positive_density(g, ex);
    for (int c = 0; c < 2; ++c) {
      std::copy(g.density[c].begin(), g.density[c].end(), tm->density(k, c));
      std::copy(g.velocity_den[c].begin(), g.velocity_den[c].end(), tm->velocity_den(k, c));
      for (int a = 0; a < pauli.grid.dim; ++a) {
        const RealField& src = g.velocity_num[c][physical_axis(pauli.grid, a)];
        std::copy(src.begin(), src.end(), tm->velocity_num(k, c, a));
      }
      std::copy(g.kappa[c].begin(), g.kappa[c].end(), tm->kappa(k, c));
    }
    std::copy(g.gain_x.begin(), g.gain_x.end(), tm->gain_x(k));
    std::copy(g.gain_y.begin(), g.gain_y.end(), tm->gain_y(k));
  }
  tm->finalize(pauli.mass);
  return tm;
}

SpinEigenForms spin_eigenstate_forms(const Grid& grid, const Field& psi, const Weyl& xi, double m, double mask) {
  require(std::abs(xi.squaredNorm() - 1.0) < 1e-12, ErrorKind::kInvalid, "xi", "xi must be normalized");
  const std::size_t n = grid.cells();
  Spectral sp(grid);
  std::array<Field, 3> grad;
  for (int a = 0; a < 3; ++a) {
    const int ga = grid_axis_of(grid, a);
    grad[a] = ga >= 0 ? sp.derivative(psi, ga) : Field(n, 0.0);
  }
  const Vec3 s = bloch(xi);
  double dmax = 0.0;
  for (const auto& v : psi) dmax = std::max(dmax, std::norm(v));
  SpinEigenForms out;
  for (int c = 0; c < 2; ++c) {
    out.v_pauli[c] = zeros3(n);
    out.v_dirac[c] = zeros3(n);
    out.t_pauli[c].assign(n, 0.0);
    out.t_dirac[c].assign(n, 0.0);
  }
  for (std::size_t q = 0; q < n; ++q) {
    const double rho = std::norm(psi[q]);
    if (!(rho > mask * dmax)) continue;
    Vec3 gS, gln;
    for (int a = 0; a < 3; ++a) {
      const cplx w = std::conj(psi[q]) * grad[a][q];
      gS(a) = w.imag() / rho;
      gln(a) = 2.0 * w.real() / rho;
    }
    for (int c = 0; c < 2; ++c) {
      const double sc = sgn(c);
      const Vec3 vbar = sc * s + gS / m + gln.cross(s) / (2 * m);
      const double tbar = std::max(0.0, -sc * s.dot(gln));
      const Vec3 vd = vbar - s * s.dot(gS) / m;
      for (int a = 0; a < 3; ++a) {
        out.v_pauli[c][a][q] = vbar(a);
        out.v_dirac[c][a][q] = vd(a);
      }
      out.t_pauli[c][q] = tbar;
      out.t_dirac[c][q] = tbar * (1.0 - sc * s.dot(gS) / m);
    }
  }
  return out;
}

std::array<Vec3Field, 2> positive_energy_velocities(const PauliField& f) {
  const Grid& grid = f.grid;
  const std::size_t n = grid.cells();
  for (int a = 0; a < 3; ++a)
    for (std::size_t q = 0; q < n; ++q)
      require(f.pot.A[a][q] == 0.0 && f.pot.V[q] == 0.0 && f.pot.B[a][q] == 0.0, ErrorKind::kInvalid, "potential",
              "positive-energy projection assumes vanishing potentials");
  FFT fft(grid, 2);
  Field buf(2 * n);
  std::copy(f.phi[0].begin(), f.phi[0].end(), buf.begin());
  std::copy(f.phi[1].begin(), f.phi[1].end(), buf.begin() + n);
  fft.forward(buf.data());
  std::array<std::vector<double>, 3> kg;
  for (int a = 0; a < grid.dim; ++a) kg[a] = grid.wavenumbers(a);
  Field chi(2 * n);
  for (std::size_t q = 0; q < n; ++q) {
    Vec3 k = Vec3::Zero();
    std::size_t rem = q;
    for (int a = grid.dim - 1; a >= 0; --a) {
      k(physical_axis(grid, a)) = kg[a][rem % grid.points[a]];
      rem /= grid.points[a];
    }
    const double E = std::sqrt(k.squaredNorm() + f.mass * f.mass);
    const cplx u = buf[q], w = buf[n + q];
    chi[q] = (k(2) * u + cplx(k(0), -k(1)) * w) / (E + f.mass);
    chi[n + q] = (cplx(k(0), k(1)) * u - k(2) * w) / (E + f.mass);
  }
  fft.backward(chi.data());
  std::array<Vec3Field, 2> v{zeros3(n), zeros3(n)};
  for (std::size_t q = 0; q < n; ++q) {
    Dirac psi;
    psi << f.phi[0][q], f.phi[1][q], chi[q], chi[n + q];
    const ChiralPair p = chiral_decompose(psi);
    const VelocityResult vr = velocity_field(p.right, Chirality::R), vl = velocity_field(p.left, Chirality::L);
    for (int a = 0; a < 3; ++a) {
      v[0][a][q] = vr.v(a);
      v[1][a][q] = vl.v(a);
    }
  }
  return v;
}

double truncation_deviation(const PauliField& f, double density_fraction) {
  const CurrentExpansion ex = expand_currents(f);
  const NRGuidance g = nr_guidance(ex, NRModel::kTruncated1);
  const auto exact = positive_energy_velocities(f);
  const double cut = density_fraction * field_max(ex.density);
  double worst = 0.0;
  for (int c = 0; c < 2; ++c) {
    const Vec3Field v = nr_velocity(g, c);
    for (std::size_t q = 0; q < ex.density.size(); ++q) {
      if (!(ex.density[q] > cut)) continue;
      double d2 = 0.0;
      for (int a = 0; a < 3; ++a) d2 += std::pow(v[a][q] - exact[c][a][q], 2);
      worst = std::max(worst, std::sqrt(d2));
    }
  }
  return worst;
}

double nr_density_drift(const TabulatedModel& model, const WaveRecord& pauli, int frame_step) {
  const std::size_t n = model.grid().cells();
  const int last = ((model.frames() - 1) / 2) * 2;
  require(last >= 2, ErrorKind::kInvalid, "t_final", "density drift needs at least three model frames");
  std::vector<RealField> p0;
  for (int c = 0; c < 2; ++c) p0.emplace_back(model.density(0, c), model.density(0, c) + n);
  const auto out = integrate_master_mol(model.grid(), 2, tabulated_flow(model), model.frame_stride(), 0,
                                        std::move(p0), {last});
  const int pf = last * frame_step;
  double l1 = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    const double rho = std::norm(pauli.component(pf, 0)[q]) + std::norm(pauli.component(pf, 1)[q]);
    l1 += std::abs(out[0][0][q] + out[0][1][q] - rho);
  }
  return l1 * model.grid().cell_volume();
}

}  // namespace zigzag
