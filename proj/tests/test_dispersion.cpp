// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "continuation.hpp"
#include "dispersion.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "grid.hpp"

using namespace wavebranch;
using fixtures::kG;
using fixtures::kPmax;

namespace {

std::vector<double> sample(const Grid1D& grid, auto&& f) {
  std::vector<double> out;
  for (double p : grid.nodes) out.push_back(f(p));
  return out;
}

// Shooting oracle for V1 at mu = -1: exact exponential below p = -1, then
// (a^3 Psi')' = (eps + a) Psi upwards; returns a^3 Psi'(0) - g Psi(0).
double v1_shoot(double lambda, double eps) {
  namespace ode = boost::numeric::odeint;
  const double ab = std::sqrt(lambda - 2.0);
  const double kappa = std::sqrt((eps + ab) / (ab * ab * ab));
  std::array<double, 2> y{1.0, ab * ab * ab * kappa};
  auto rhs = [&](const std::array<double, 2>& x, std::array<double, 2>& dx, double p) {
    const double a = std::sqrt(lambda + 2.0 * p);
    dx[0] = x[1] / (a * a * a);
    dx[1] = (eps + a) * x[0];
  };
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<std::array<double, 2>>>(1e-14, 1e-14), rhs,
                          y, -1.0, 0.0, 1e-3);
  return y[1] - kG * y[0];
}

double v1_lambda_star(double eps) {
  std::uintmax_t it = 200;
  const auto r = boost::math::tools::toms748_solve([&](double l) { return v1_shoot(l, eps); }, 2.0 + 1e-9,
                                                   kG + 2.0, boost::math::tools::eps_tolerance<double>(50), it);
  return 0.5 * (r.first + r.second);
}

double dense_smallest(const SLPencil& pen) {
  const auto n = static_cast<Eigen::Index>(pen.diag.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = pen.diag[i];
    b(i, i) = pen.mass[i];
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = pen.off[i];
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  return es.eigenvalues()(0);
}

// Root of lambda^2 + eps lambda^{3/2} = g^2.
double v0_lambda_eps(double eps) {
  std::uintmax_t it = 200;
  const auto r = boost::math::tools::toms748_solve(
      [&](double l) { return l * l + eps * std::pow(l, 1.5) - kG * kG; }, 1.0, 2.0 * kG,
      boost::math::tools::eps_tolerance<double>(52), it);
  return 0.5 * (r.first + r.second);
}

}  // namespace

TEST_CASE("Rayleigh quotient of the exponential trial function") {
  const auto z = fixtures::v0();
  const auto grid = build_grid1d_spacing(z, kPmax, 1e-2);
  for (double lam : {kG, 2.0 * kG, 4.0 * kG}) {
    const auto phi = sample(grid, [&](double p) { return std::exp(p / std::sqrt(lam)); });
    CHECK(rayleigh_quotient(z, lam, 0.0, grid, phi, kG) == doctest::Approx(1.0 - 2.0 * kG / lam).epsilon(1e-4));
  }
  // Quadrature error is second order.
  const double lam = 2.0 * kG;
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const auto gk = build_grid1d_spacing(z, kPmax, k == 0 ? 4e-2 : 2e-2);
    const auto phi = sample(gk, [&](double p) { return std::exp(p / std::sqrt(lam)); });
    err[k] = std::abs(rayleigh_quotient(z, lam, 0.0, gk, phi, kG) - (1.0 - 2.0 * kG / lam));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));

  const auto zero = std::vector<double>(grid.size(), 0.0);
  CHECK_THROWS_AS(rayleigh_quotient(z, kG, 0.0, grid, zero, kG), Error);
}

TEST_CASE("Rayleigh quotient below the bracket") {
  const auto one = fixtures::v1();
  const auto grid = build_grid1d(one, kPmax, 256, 1024);
  const auto phi = sample(grid, [](double p) { return std::exp(p); });
  CHECK(rayleigh_quotient(one, 2.0 + 1e-6, 0.01, grid, phi, kG) < -1.0);
}

TEST_CASE("principal eigenpair") {
  const auto z = fixtures::v0();
  const auto grid = build_grid1d_spacing(z, kPmax, 1e-2);
  const auto p1 = principal_eigenpair(assemble_pencil(z, kG, 0.0, grid, kG));
  CHECK(p1.mu == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(p1.psi.back() > 0.0);
  // At lambda = g the tail closure is exact: Psi = e^{p / sqrt(g)}.
  for (std::size_t i = 0; i < grid.size(); i += 97) {
    CHECK(p1.psi[i] / p1.psi.back() == doctest::Approx(std::exp(grid.nodes[i] / std::sqrt(kG))).epsilon(1e-4));
  }
  // Away from lambda = g the eigenfunction e^{g p / lambda^{3/2}} decays slowly and needs a deep strip.
  const double lam = 4.0 * kG;
  const auto deep = build_grid1d(z, 400.0, 32, 16384);
  const auto p4 = principal_eigenpair(assemble_pencil(z, lam, 0.0, deep, kG));
  CHECK(p4.mu > -1.0);
  CHECK(p4.mu == doctest::Approx(-kG * kG / (lam * lam)).epsilon(1e-3));

  const auto one = fixtures::v1();
  const auto g1 = build_grid1d(one, kPmax, 64, 256);
  const auto pen = assemble_pencil(one, 4.0, 0.0, g1, kG);
  const auto ep = principal_eigenpair(pen);
  CHECK(ep.mu == doctest::Approx(dense_smallest(pen)).epsilon(1e-10));
  double norm = 0.0;
  for (std::size_t i = 0; i < ep.psi.size(); ++i) norm += pen.mass[i] * ep.psi[i] * ep.psi[i];
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  // Deterministic.
  const auto again = principal_eigenpair(assemble_pencil(one, 4.0, 0.0, g1, kG));
  CHECK(again.mu == ep.mu);
  CHECK(again.psi == ep.psi);
}

TEST_CASE("pencil rejects a singular coefficient") {
  const auto one = fixtures::v1();
  const auto grid = build_grid1d(one, kPmax, 16, 64);
  CHECK_THROWS_AS(assemble_pencil(one, 1.5, 0.0, grid, kG), Error);
  CHECK_THROWS_AS(assemble_pencil(one, 4.0, -1.0, grid, kG), Error);
}

TEST_CASE("bifurcation point of the irrotational problem") {
  const auto z = fixtures::v0();
  const auto grid = build_grid1d(z, kPmax, 64, 4096);
  const auto pt = find_bifurcation(z, 0.0, kG, grid);
  CHECK(pt.lambda == doctest::Approx(kG).epsilon(1e-5));
  CHECK(pt.mu == doctest::Approx(-1.0).epsilon(1e-10));

  const auto coarse = build_grid1d(z, kPmax, 32, 512);
  const double target = v0_lambda_eps(0.01);
  CHECK(target == doctest::Approx(9.7944).epsilon(1e-4));
  CHECK(find_bifurcation(z, 0.01, kG, coarse).lambda == doctest::Approx(target).epsilon(1e-3));
}

TEST_CASE("bifurcation point with a vorticity jump against shooting") {
  const auto one = fixtures::v1();
  const double exact = v1_lambda_star(0.0);
  CHECK(exact > 2.0);
  CHECK(exact <= kG + 2.0);
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const std::size_t m = k == 0 ? 512 : 1024;
    const auto grid = build_grid1d(one, kPmax, m / 8, m);
    err[k] = find_bifurcation(one, 0.0, kG, grid).lambda - exact;
  }
  CHECK(std::abs(err[1]) / exact <= 1e-5);
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));

  const auto grid = build_grid1d(one, kPmax, 64, 512);
  const double exact_eps = v1_lambda_star(0.05);
  CHECK(find_bifurcation(one, 0.05, kG, grid).lambda == doctest::Approx(exact_eps).epsilon(1e-4));
}

TEST_CASE("bracket handling") {
  const auto z = fixtures::v0();
  const auto grid = build_grid1d(z, kPmax, 32, 512);
  const auto pt = find_bifurcation(z, 0.0, kG, grid, 1, BracketOverride{5.0, 12.0});
  CHECK(pt.lambda == doctest::Approx(kG).epsilon(1e-4));
  try {
    find_bifurcation(z, 0.0, kG, grid, 1, BracketOverride{12.0, 20.0});
    FAIL("expected no bifurcation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoBifurcation);
  }
  // Second mode: lambda = g / k.
  const auto fine = build_grid1d(z, kPmax, 32, 4096);
  CHECK(find_bifurcation(z, 0.0, kG, fine, 2).lambda == doctest::Approx(kG / 2.0).epsilon(1e-4));
}

TEST_CASE("mu is increasing with the Hellmann-Feynman slope") {
  for (const auto& v : {fixtures::v0(), fixtures::v1()}) {
    const auto grid = build_grid1d(v, kPmax, 128, 1024);
    const double lo = -2.0 * v.gamma_inf();
    int samples = 0;
    for (int k = 1; k <= 20; ++k) {
      const double lam = lo + 0.5 + 1.2 * k;
      const auto pt = principal_eigenpair(assemble_pencil(v, lam, 0.0, grid, kG));
      REQUIRE(pt.mu < 0.0);
      const double d = mu_derivative(pt, v, kG);
      CHECK(d > 0.0);
      const double h = 1e-4 * lam;
      const std::vector<double> ls{lam - h, lam + h};
      const auto mus = mu_scan(v, 0.0, kG, grid, ls);
      const double fd = (mus[1] - mus[0]) / (2.0 * h);
      CHECK(std::abs(d - fd) <= 1e-4 * std::abs(fd));
      ++samples;
    }
    CHECK(samples == 20);
  }
}

TEST_CASE("transversality identity") {
  const auto one = fixtures::v1();
  const auto g1 = build_grid1d(one, kPmax, 256, 2048);
  const auto pt = find_bifurcation(one, 0.0, kG, g1);
  const auto tr = transversality(pt, one, kG);
  CHECK(tr.lhs < 0.0);
  CHECK(tr.rhs < 0.0);
  CHECK(std::abs(tr.lhs - tr.rhs) / std::abs(tr.rhs) <= 1e-6);

  const auto z = fixtures::v0();
  const auto g0 = build_grid1d(z, kPmax, 64, 2048);
  const auto p0 = find_bifurcation(z, 0.0, kG, g0);
  const auto t0 = transversality(p0, z, kG);
  const double scale = p0.psi.back() * p0.psi.back();
  CHECK(t0.rhs / scale == doctest::Approx(-std::numbers::pi).epsilon(1e-3));
  CHECK(t0.lhs / scale == doctest::Approx(-std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("epsilon homotopy") {
  const auto z = fixtures::v0();
  const auto grid = build_grid1d(z, kPmax, 32, 1024);
  const auto tab = epsilon_homotopy(z, kG, grid, {1e-2, 1e-3, 1e-4, 0.0});
  REQUIRE(tab.rows.size() == 4);
  for (const auto& r : tab.rows) CHECK(r.ok);
  CHECK(tab.rows[0].lambda == doctest::Approx(9.7944).epsilon(1e-4));
  for (int i = 0; i < 3; ++i) {
    CHECK(tab.rows[i].lambda == doctest::Approx(v0_lambda_eps(tab.rows[i].epsilon)).epsilon(1e-3));
  }
  CHECK(tab.order == doctest::Approx(1.0).epsilon(0.1));

  const auto one = fixtures::v1();
  const auto g1 = build_grid1d(one, kPmax, 64, 512);
  const auto t1 = epsilon_homotopy(one, kG, g1, {1e-1, 1e-2, 1e-3, 0.0});
  for (std::size_t i = 1; i < t1.rows.size(); ++i) CHECK(t1.rows[i].lambda > t1.rows[i - 1].lambda);
  CHECK(t1.order == doctest::Approx(1.0).epsilon(0.1));
}
