// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include <boost/math/tools/toms748_solve.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <unistd.h>
#include <string>

#include "continuation.hpp"
#include "diagnostics.hpp"
#include "dispersion.hpp"
#include "error.hpp"
#include "laminar.hpp"
#include "physical.hpp"

using namespace wavebranch;

namespace {

constexpr double kG = 9.81;
constexpr double kPmax = 8.0 * std::numbers::pi;

Vorticity v0() { return Vorticity({{0.0, kInfinity, PolyExp{{0.0}, 0.0}}}, 1.0); }
Vorticity v1() {
  return Vorticity({{0.0, 1.0, PolyExp{{1.0}, 0.0}}, {1.0, kInfinity, PolyExp{{0.0}, 0.0}}}, 1.0);
}
Vorticity v2() { return Vorticity({{0.0, kInfinity, PolyExp{{1.0}, 1.0}}}, 1.0); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Root of lambda^2 + eps lambda^{3/2} = g^2.
double v0_lambda_eps(double eps) {
  std::uintmax_t it = 200;
  const auto r = boost::math::tools::toms748_solve(
      [&](double l) { return l * l + eps * std::pow(l, 1.5) - kG * kG; }, 1.0, 2.0 * kG,
      boost::math::tools::eps_tolerance<double>(52), it);
  return 0.5 * (r.first + r.second);
}

struct Setup {
  TransmissionOperator op;
  DispersionPoint point;
  KernelMode kernel;
};

Setup setup(const Vorticity& v, std::size_t nq, std::size_t np_upper, std::size_t np_lower) {
  TransmissionOperator op(v, build_grid(v, nq, np_upper, np_lower, kPmax), kG, 1e-4);
  auto point = find_bifurcation(v, 0.0, kG, op.grid().p);
  auto kernel = refine_kernel(op, point, 0.0);
  return {std::move(op), std::move(point), std::move(kernel)};
}

Outcome c1() {
  const auto z = v0();
  const auto pt = find_bifurcation(z, 0.0, kG, build_grid1d(z, kPmax, 64, 4096));
  const double rel = std::abs(pt.lambda - kG) / kG;
  return {rel <= 1e-5, fmt("lambda* = %.12g, relative error %.3e (tol 1e-5, np_lower 4096)", pt.lambda, rel)};
}

Outcome c2() {
  const auto z = v0();
  const auto grid = build_grid1d_spacing(z, kPmax, 1e-3);
  double worst = 0.0;
  for (double lam : {kG, 2.0 * kG, 4.0 * kG}) {
    std::vector<double> phi;
    for (double p : grid.nodes) phi.push_back(std::exp(p / std::sqrt(lam)));
    worst = std::max(worst, std::abs(rayleigh_quotient(z, lam, 0.0, grid, phi, kG) - (1.0 - 2.0 * kG / lam)));
  }
  return {worst <= 1e-6, fmt("max |R - (1 - 2g/lambda)| = %.3e over lambda in {g, 2g, 4g} (tol 1e-6)", worst)};
}

Outcome c3() {
  const auto z = v0();
  const auto tab = epsilon_homotopy(z, kG, build_grid1d(z, kPmax, 64, 2048), {1e-2, 1e-3, 1e-4, 0.0});
  double worst = 0.0;
  bool ok = true;
  for (int k = 0; k < 2; ++k) {
    ok = ok && tab.rows[k].ok;
    worst = std::max(worst, std::abs(tab.rows[k].lambda - v0_lambda_eps(tab.rows[k].epsilon)));
  }
  const bool pass = ok && worst <= 1e-3 && tab.order >= 0.9;
  return {pass, fmt("max |lambda^eps - closed form| = %.3e (tol 1e-3), order %.4f (>= 0.9)", worst, tab.order)};
}

Outcome c4() {
  double worst = 0.0;
  int cases = 0;
  for (const auto& v : {v0(), v1(), v2()}) {
    const TransmissionOperator op(v, build_grid(v, 32, 24, 128, kPmax), kG, 1e-4);
    for (double lam : {3.0, 5.0, 8.0, 12.0, 20.0}) {
      const WaveState zero{lam, 0.0, std::vector<double>(op.grid().field_size(), 0.0)};
      worst = std::max(worst, max_abs(op.residual(zero)));
      ++cases;
    }
  }
  return {worst <= 1e-10, fmt("max residual %.3e over %d laminar states (tol 1e-10)", worst, cases)};
}

Outcome c5() {
  const auto one = v1();
  const auto grid = build_grid(one, 8, 8, 16, 6.0);
  const TransmissionOperator op(one, grid, kG, 1e-4);
  std::mt19937 rng(20261019);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    WaveState st{7.0 + 4.0 * (u(rng) + 1.0), 0.02 * (u(rng) + 1.0), std::vector<double>(grid.field_size(), 0.0)};
    const double c1c = 0.05 * u(rng);
    const double c2c = 0.02 * u(rng);
    for (std::size_t i = 1; i < grid.np(); ++i) {
      const double env = std::exp(0.8 * grid.p.nodes[i]);
      for (std::size_t j = 0; j <= grid.nq; ++j) {
        const double q = grid.q(j);
        st.w[grid.field_index(i, j)] =
            env * (c1c * std::cos(q) + c2c * std::cos(2.0 * q)) + 1e-3 * env * u(rng);
      }
    }
    op.check_margins(st);
    const auto lin = op.jacobian(st);
    const std::size_t n = grid.unknowns();
    for (std::size_t col = 0; col < n; ++col) {
      const std::size_t k = col + grid.width();
      const double h = 1e-6 * std::max(1.0, std::abs(st.w[k]));
      auto plus = st;
      auto minus = st;
      plus.w[k] += h;
      minus.w[k] -= h;
      const auto rp = op.residual(plus);
      const auto rm = op.residual(minus);
      double diff = 0.0;
      double norm = 0.0;
      for (std::size_t row = 0; row < n; ++row) {
        const double an = lin.jw.in_band(row, col) ? lin.jw.get(row, col) : 0.0;
        diff = std::max(diff, std::abs((rp[row] - rm[row]) / (2.0 * h) - an));
        norm = std::max(norm, std::abs(an));
      }
      worst = std::max(worst, diff / norm);
    }
  }
  return {worst <= 1e-6, fmt("max relative column error %.3e over 5 random states (tol 1e-6)", worst)};
}

Outcome c6() {
  ContinuationConfig cfg;
  std::string detail;
  bool pass = true;
  for (int which = 0; which < 2; ++which) {
    const auto s = setup(which == 0 ? v0() : v1(), 32, 24, 128);
    const auto lin = mode_field(s.op.grid(), s.kernel.phi);
    auto rem = [&](double amp) {
      const auto st = solve_at_amplitude(s.op, s.kernel, amp, cfg).state;
      double m = 0.0;
      for (std::size_t k = 0; k < lin.size(); ++k) m = std::max(m, std::abs(st.w[k] - amp * lin[k]));
      return m;
    };
    const double ratio = rem(1e-3) / rem(5e-4);
    pass = pass && ratio >= 3.5 && ratio <= 4.5;
    detail += fmt("%sV%d ratio %.4f", which == 0 ? "" : ", ", which, ratio);
  }
  return {pass, detail + " (range [3.5, 4.5])"};
}

struct Branches {
  Branch b0;
  Branch b1;
};

const Branches& branches() {
  static const Branches b = [] {
    ContinuationConfig cfg;
    const auto s0 = setup(v0(), 32, 24, 128);
    const auto s1 = setup(v1(), 32, 24, 128);
    return Branches{run_branch(s0.op, s0.point, cfg), run_branch(s1.op, s1.point, cfg)};
  }();
  return b;
}

Outcome c7() {
  const auto& br = branches();
  const auto z = v0();
  const auto one = v1();
  const auto g0 = build_grid(z, 32, 24, 128, kPmax);
  const auto g1 = build_grid(one, 32, 24, 128, kPmax);
  std::size_t bad = 0;
  for (const auto& st : br.b0.states) bad += check_nodal(g0, st).pass() ? 0 : 1;
  for (const auto& st : br.b1.states) bad += check_nodal(g1, st).pass() ? 0 : 1;
  auto flipped = br.b1.states.front();
  for (double& w : flipped.w) w = -w;
  const bool flip_fails = !check_nodal(g1, flipped).pass();
  const bool pass = bad == 0 && flip_fails && !br.b0.states.empty() && !br.b1.states.empty();
  return {pass, fmt("V0 %zu points, V1 %zu points, %zu failing; sign-flipped state %s", br.b0.states.size(),
                    br.b1.states.size(), bad, flip_fails ? "fails" : "passes")};
}

Outcome c8() {
  const auto s = setup(v0(), 32, 24, 256);
  const auto st = solve_at_amplitude(s.op, s.kernel, 1e-3, ContinuationConfig{}).state;
  const double tau = fit_decay(s.op.grid(), st).tau;
  const double expected = 1.0 / std::sqrt(st.lambda + 2.0 * v0().gamma_infinity());
  const double rel = std::abs(tau - expected) / expected;
  return {rel <= 0.1, fmt("tau %.5f vs %.5f, relative %.3e (tol 0.1)", tau, expected, rel)};
}

Outcome c9() {
  const auto one = v1();
  const auto p1 = find_bifurcation(one, 0.0, kG, build_grid1d(one, kPmax, 256, 2048));
  const auto t1 = transversality(p1, one, kG);
  const double rel = std::abs(t1.lhs - t1.rhs) / std::abs(t1.rhs);
  const auto z = v0();
  const auto p0 = find_bifurcation(z, 0.0, kG, build_grid1d(z, kPmax, 64, 2048));
  const auto t0 = transversality(p0, z, kG);
  const double scaled = t0.rhs / (p0.psi.back() * p0.psi.back());
  const double err = std::abs(scaled + std::numbers::pi);
  const bool pass = rel <= 1e-6 && t1.lhs < 0.0 && t1.rhs < 0.0 && err <= 1e-3;
  return {pass, fmt("V1 pairing %.10g vs closed form %.10g (relative %.3e, tol 1e-6); V0 closed form %.8f vs -pi "
                    "(error %.3e, tol 1e-3)",
                    t1.lhs, t1.rhs, rel, scaled, err)};
}

Outcome c10() {
  double worst = 0.0;
  int samples = 0;
  bool positive = true;
  for (const auto& v : {v0(), v1()}) {
    const auto grid = build_grid1d(v, kPmax, 128, 1024);
    const double lo = -2.0 * v.gamma_inf();
    for (int k = 1; k <= 20; ++k) {
      const double lam = lo + 0.5 + 1.2 * k;
      const auto pt = principal_eigenpair(assemble_pencil(v, lam, 0.0, grid, kG));
      if (!(pt.mu < 0.0)) continue;
      const double d = mu_derivative(pt, v, kG);
      positive = positive && d > 0.0;
      const double h = 1e-4 * lam;
      const std::vector<double> ls{lam - h, lam + h};
      const auto mus = mu_scan(v, 0.0, kG, grid, ls);
      const double fd = (mus[1] - mus[0]) / (2.0 * h);
      worst = std::max(worst, std::abs(d - fd) / std::abs(fd));
      ++samples;
    }
  }
  const bool pass = positive && samples == 40 && worst <= 1e-4;
  return {pass, fmt("%d samples with mu < 0, all positive: %s, max relative FD mismatch %.3e (tol 1e-4)", samples,
                    positive ? "yes" : "no", worst)};
}

// Same nodes on [-p_max, 0], continued downward to -p_new at (nearly) the bottom spacing.
Grid1D deepen(const Grid1D& grid, double p_new) {
  const double h0 = grid.nodes[1] - grid.nodes[0];
  const double extra = p_new - grid.p_max();
  const auto m = static_cast<std::size_t>(std::lround(extra / h0));
  Grid1D out;
  for (std::size_t i = 0; i < m; ++i) {
    out.nodes.push_back(-p_new + extra * static_cast<double>(i) / static_cast<double>(m));
  }
  out.nodes.insert(out.nodes.end(), grid.nodes.begin(), grid.nodes.end());
  for (std::size_t k : grid.interfaces) out.interfaces.push_back(k + m);
  return out;
}

Outcome c11() {
  std::string detail;
  bool pass = true;
  for (int which = 0; which < 2; ++which) {
    const auto v = which == 0 ? v0() : v1();
    const std::size_t up = 64;
    const std::size_t lo = 1024;
    const double a = find_bifurcation(v, 0.0, kG, build_grid1d(v, kPmax, up, lo)).lambda;
    const double b = find_bifurcation(v, 0.0, kG, deepen(build_grid1d(v, kPmax, up, lo), 2.0 * kPmax)).lambda;
    const double l1 = find_bifurcation(v, 0.0, kG, build_grid1d(v, kPmax, up / 2, lo / 2)).lambda;
    const double l3 = find_bifurcation(v, 0.0, kG, build_grid1d(v, kPmax, up * 2, lo * 2)).lambda;
    const double change = std::abs(b - a);
    const double order = std::log2(std::abs(l1 - a) / std::abs(a - l3));
    pass = pass && change < 1e-8 && order >= 1.9;
    detail += fmt("%sV%d: P_max doubling changes lambda* by %.3e (tol 1e-8), order %.4f (>= 1.9)",
                  which == 0 ? "" : "; ", which, change, order);
  }
  return {pass, detail};
}

Outcome c12() {
  const auto z = v0();
  const auto grid = build_grid(z, 32, 24, 128, kPmax);
  const TransmissionOperator op(z, grid, kG, 1e-4);
  const double patm = 1.0e5;
  const auto pw = reconstruct(op, WaveState{kG, 0.0, std::vector<double>(grid.field_size(), 0.0)}, patm);
  double uv = 0.0;
  for (std::size_t k = 0; k < pw.u.size(); ++k) uv = std::max({uv, std::abs(pw.u[k]), std::abs(pw.v[k])});
  double eta = 0.0;
  for (double e : pw.eta) eta = std::max(eta, std::abs(e + 0.5));
  double pres = 0.0;
  for (std::size_t j = 0; j <= grid.nq; ++j) {
    pres = std::max(pres, std::abs(pw.pressure[grid.field_index(grid.np() - 1, j)] - patm));
  }
  const bool lam_ok = uv <= 1e-10 && eta <= 1e-10 && pres <= 1e-10;

  const auto one = v1();
  double kin[2];
  double dyn[2];
  for (int r = 0; r < 2; ++r) {
    const std::size_t f = r == 0 ? 1 : 2;
    const auto s = setup(one, 16 * f, 16 * f, 128 * f);
    const auto st = solve_at_amplitude(s.op, s.kernel, 0.05, ContinuationConfig{}).state;
    const auto sc = surface_conditions(s.op, st);
    kin[r] = sc.kinematic;
    dyn[r] = sc.dynamic;
  }
  const double ok_kin = std::log2(kin[0] / kin[1]);
  const double ok_dyn = std::log2(dyn[0] / dyn[1]);
  const bool pass = lam_ok && ok_kin >= 1.8 && ok_dyn >= 1.8;
  return {pass, fmt("laminar |u|,|v| %.1e, |eta + 0.5| %.1e, |P - P_atm| %.1e (tol 1e-10); surface condition "
                    "orders kinematic %.3f, dynamic %.3f (>= 1.8)",
                    uv, eta, pres, ok_kin, ok_dyn)};
}

Outcome c13() {
  const auto& br = branches();
  const bool declared = br.b0.reason == Termination::MaxSteps || br.b0.reason == Termination::NodalPatternLost ||
                        br.b0.reason == Termination::SpeedUnbounded ||
                        br.b0.reason == Termination::StagnationApproach || br.b0.reason == Termination::MarginHit ||
                        br.b0.reason == Termination::NewtonFailure;
  const auto s = setup(v1(), 32, 24, 128);
  const auto lam = make_laminar(v1(), s.kernel.lambda, kG, s.op.grid().p);
  double hp0 = 0.0;
  for (double v : lam.hp) hp0 = std::max(hp0, v);
  ContinuationConfig stag;
  stag.hp_max = 1.01 * hp0;
  const auto bs = run_branch(s.op, s.point, stag);
  ContinuationConfig speed;
  speed.lambda_max = s.kernel.lambda + 0.05;
  const auto bl = run_branch(s.op, s.point, speed);
  const bool pass =
      declared && bs.reason == Termination::StagnationApproach && bl.reason == Termination::SpeedUnbounded;
  return {pass, fmt("default runs: V0 %s, V1 %s; hp_max forced: %s; lambda_max forced: %s", to_string(br.b0.reason),
                    to_string(br.b1.reason), to_string(bs.reason), to_string(bl.reason))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome c14(const std::string& cli, const std::string& configs) {
  namespace fs = std::filesystem;
  const fs::path work = fs::temp_directory_path() / ("wavebranch_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  std::string csv[2];
  for (int r = 0; r < 2; ++r) {
    const fs::path dir = work / (r == 0 ? "a" : "b");
    const std::string cmd = "WAVEBRANCH_OUTPUT_DIR='" + dir.string() + "' '" + cli + "' -c '" + configs +
                            "/v1.json' branch > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "branch run exited with an error"};
    csv[r] = slurp(dir / "branch.csv");
  }
  const std::string ma = slurp(work / "a" / "manifest.json");
  const std::string mb = slurp(work / "b" / "manifest.json");
  fs::remove_all(work);
  const bool pass = !csv[0].empty() && csv[0] == csv[1] && ma == mb;
  return {pass, fmt("two branch runs: %zu bytes, CSVs %s, manifests %s", csv[0].size(),
                    csv[0] == csv[1] ? "identical" : "differ", ma == mb ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string configs = argc > 2 ? argv[2] : "";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"irrotational dispersion oracle", c1},
      {"Rayleigh closed form", c2},
      {"epsilon-homotopy order", c3},
      {"laminar exactness", c4},
      {"Jacobian consistency", c5},
      {"local branch form", c6},
      {"nodal pattern", c7},
      {"decay rate", c8},
      {"transversality", c9},
      {"monotonicity certificate", c10},
      {"truncation and grid convergence", c11},
      {"physical consistency", c12},
      {"termination classification", c13},
      {"determinism", [&] { return cli.empty() ? Outcome{false, "no CLI path given"} : c14(cli, configs); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
