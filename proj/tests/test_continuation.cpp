// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "continuation.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "laminar.hpp"

using namespace wavebranch;
using fixtures::kG;
using fixtures::kPmax;

namespace {

struct Setup {
  Vorticity vort;
  TransmissionOperator op;
  DispersionPoint point;
  KernelMode kernel;
};

Setup make_setup(const Vorticity& v, std::size_t nq, std::size_t np_upper, std::size_t np_lower) {
  TransmissionOperator op(v, build_grid(v, nq, np_upper, np_lower, kPmax), kG, 1e-4);
  auto point = find_bifurcation(v, 0.0, kG, op.grid().p);
  auto kernel = refine_kernel(op, point, 0.0);
  return {v, std::move(op), std::move(point), std::move(kernel)};
}

double remainder(const Setup& s, double amp, const ContinuationConfig& cfg) {
  const auto res = solve_at_amplitude(s.op, s.kernel, amp, cfg);
  const auto lin = mode_field(s.op.grid(), s.kernel.phi);
  double m = 0.0;
  for (std::size_t k = 0; k < lin.size(); ++k) m = std::max(m, std::abs(res.state.w[k] - amp * lin[k]));
  return m;
}

}  // namespace

TEST_CASE("local branch is quadratic in the amplitude") {
  ContinuationConfig cfg;
  for (const auto& v : {fixtures::v0(), fixtures::v1()}) {
    const auto s = make_setup(v, 16, 16, 64);
    const double ratio = remainder(s, 1e-3, cfg) / remainder(s, 5e-4, cfg);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
    // lambda moves quadratically off the bifurcation value.
    const auto l1 = solve_at_amplitude(s.op, s.kernel, 2e-3, cfg).state.lambda - s.kernel.lambda;
    const auto l2 = solve_at_amplitude(s.op, s.kernel, 1e-3, cfg).state.lambda - s.kernel.lambda;
    CHECK(l1 / l2 == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("Newton converges quadratically") {
  const auto s = make_setup(fixtures::v1(), 16, 16, 64);
  ContinuationConfig cfg;
  cfg.newton_tol = 1e-12;
  const auto res = solve_at_amplitude(s.op, s.kernel, 0.05, cfg);
  const auto& h = res.history;
  REQUIRE(h.size() >= 3);
  CHECK(h.back() <= 1e-12);
  int quadratic = 0;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    if (h[k] < 1e-2 * h[0] && h[k + 1] > 1e-14) {
      CHECK(h[k + 1] / h[0] <= 10.0 * (h[k] / h[0]) * (h[k] / h[0]));
      ++quadratic;
    }
  }
  CHECK(quadratic >= 1);

  // fix_lambda pins lambda.
  const auto fl = newton_correct(s.op, res.state, fix_lambda(s.op, res.state.lambda), cfg);
  CHECK(fl.state.lambda == res.state.lambda);
  CHECK(fl.iterations <= 1);

  ContinuationConfig tight = cfg;
  tight.max_newton = 1;
  try {
    solve_at_amplitude(s.op, s.kernel, 0.2, tight);
    FAIL("expected Newton failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NewtonFailure);
  }
}

TEST_CASE("initial guess interpolates the dispersion mode") {
  const auto s = make_setup(fixtures::v1(), 16, 16, 64);
  const auto st = initial_guess(s.op.grid(), s.point, 0.01);
  CHECK(st.lambda == s.point.lambda);
  const auto& grid = s.op.grid();
  CHECK(st.w[grid.field_index(grid.np() - 1, 0)] == doctest::Approx(0.01 * s.point.psi.back()));
  CHECK(st.w[grid.field_index(grid.np() - 1, grid.nq)] == doctest::Approx(-0.01 * s.point.psi.back()));
  for (std::size_t j = 0; j <= grid.nq; ++j) CHECK(st.w[j] == 0.0);
}

TEST_CASE("irrotational branch with default settings") {
  const auto s = make_setup(fixtures::v0(), 32, 24, 128);
  ContinuationConfig cfg;
  const auto br = run_branch(s.op, s.point, cfg);
  CHECK(br.points.size() >= 50);
  CHECK(br.points.size() == br.states.size());
  CHECK(br.lambda_bifurcation == doctest::Approx(kG).epsilon(1e-2));
  for (const auto& p : br.points) {
    CHECK(p.nodal_ok);
    CHECK(p.amplitude > 0.0);
    CHECK(p.surface_residual <= cfg.newton_tol);
  }
  // Amplitude increases strictly up to the first turning point in lambda.
  std::size_t k = 1;
  while (k < br.points.size() && br.points[k].lambda > br.points[k - 1].lambda) {
    CHECK(br.points[k].amplitude > br.points[k - 1].amplitude);
    ++k;
  }
  CHECK(k >= 20);
  // Arclength and step counters.
  for (std::size_t i = 1; i < br.points.size(); ++i) {
    CHECK(br.points[i].s > br.points[i - 1].s);
    CHECK(br.points[i].step == static_cast<int>(i));
  }
}

TEST_CASE("rotational branch and termination") {
  const auto s = make_setup(fixtures::v1(), 16, 16, 64);
  ContinuationConfig cfg;
  cfg.max_steps = 15;
  const auto br = run_branch(s.op, s.point, cfg);
  CHECK(br.reason == Termination::MaxSteps);
  CHECK(br.points.size() == 15);
  for (const auto& p : br.points) {
    CHECK(p.nodal_ok);
    CHECK(p.interface_residual <= cfg.newton_tol);
    CHECK(p.c == doctest::Approx(wave_speed(p.lambda, -1.0)));
  }
  CHECK(br.points.back().lambda > br.points.front().lambda);

  // Stagnation: cap h_p just above its laminar maximum.
  const auto lam = make_laminar(s.vort, s.kernel.lambda, kG, s.op.grid().p);
  double hp0 = 0.0;
  for (double v : lam.hp) hp0 = std::max(hp0, v);
  ContinuationConfig stag;
  stag.hp_max = 1.01 * hp0;
  const auto bs = run_branch(s.op, s.point, stag);
  CHECK(bs.reason == Termination::StagnationApproach);
  CHECK(bs.points.size() < 200);

  ContinuationConfig speed;
  speed.lambda_max = s.kernel.lambda + 0.05;
  const auto bl = run_branch(s.op, s.point, speed);
  CHECK(bl.reason == Termination::SpeedUnbounded);
  CHECK(bl.points.back().lambda >= speed.lambda_max);

  CHECK(std::string(to_string(Termination::NodalPatternLost)) != std::string(to_string(Termination::MaxSteps)));
}

TEST_CASE("branch CSV is deterministic with full precision") {
  const auto s = make_setup(fixtures::v1(), 16, 16, 64);
  ContinuationConfig cfg;
  cfg.max_steps = 5;
  const auto a = branch_csv(run_branch(s.op, s.point, cfg));
  const auto b = branch_csv(run_branch(s.op, s.point, cfg));
  CHECK(a == b);
  std::istringstream in(a);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("lambda") != std::string::npos);
  CHECK(header.find("amplitude") != std::string::npos);
  int rows = 0;
  std::string line;
  std::string last;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
    last = line;
  }
  CHECK(rows == 5);
  CHECK(last == "# termination: " + std::string(to_string(Termination::MaxSteps)));

  // Every number round-trips.
  const auto br = run_branch(s.op, s.point, cfg);
  std::istringstream again(a);
  std::getline(again, header);
  std::getline(again, line);
  std::istringstream fields(line);
  std::string cell;
  bool found = false;
  while (std::getline(fields, cell, ',')) {
    if (std::strtod(cell.c_str(), nullptr) == br.points[0].lambda) found = true;
  }
  CHECK(found);
}
