// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "dispersion.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"
#include "numerics.hpp"

namespace wavebranch {

namespace {

struct GammaSamples {
  std::vector<double> nodes;
  std::vector<double> mids;
};

GammaSamples sample_gamma(const Vorticity& vort, const Grid1D& grid) {
  GammaSamples s;
  const auto& p = grid.nodes;
  s.nodes.reserve(p.size());
  for (double x : p) s.nodes.push_back(vort.big_gamma(x));
  for (std::size_t i = 0; i + 1 < p.size(); ++i) s.mids.push_back(vort.big_gamma(0.5 * (p[i] + p[i + 1])));
  return s;
}

double checked_sqrt(double lambda, double big_gamma, double p) {
  const double rad = lambda + 2.0 * big_gamma;
  if (!(rad > 0.0)) {
    throw Error(ErrorKind::SingularCoefficient,
                "lambda + 2 Gamma(p) is not positive at p = " + std::to_string(p));
  }
  return std::sqrt(rad);
}

std::vector<double> trapezoid_weights(const std::vector<double>& p) {
  std::vector<double> w(p.size(), 0.0);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double h = p[i + 1] - p[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

SLPencil assemble_from(const GammaSamples& gs, const Grid1D& grid, double lambda, double epsilon,
                       double g, int mode_k) {
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::ParameterOutOfRange, "epsilon must be >= 0");
  if (mode_k < 1) throw Error(ErrorKind::ParameterOutOfRange, "mode number must be >= 1");
  const auto& p = grid.nodes;
  const std::size_t n = p.size();
  SLPencil pen;
  pen.lambda = lambda;
  pen.epsilon = epsilon;
  pen.g = g;
  pen.mode_k = mode_k;
  pen.grid = grid;
  pen.diag.assign(n, 0.0);
  pen.off.assign(n - 1, 0.0);
  pen.mass.assign(n, 0.0);
  pen.a_nodes.resize(n);
  pen.a_mid.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) pen.a_nodes[i] = checked_sqrt(lambda, gs.nodes[i], p[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    pen.a_mid[i] = checked_sqrt(lambda, gs.mids[i], 0.5 * (p[i] + p[i + 1]));
  }

  const auto w = trapezoid_weights(p);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double c = std::pow(pen.a_mid[i], 3) / (p[i + 1] - p[i]);
    pen.diag[i] += c;
    pen.diag[i + 1] += c;
    pen.off[i] -= c;
  }
  for (std::size_t i = 0; i < n; ++i) {
    pen.diag[i] += epsilon * w[i];
    pen.mass[i] = w[i] * pen.a_nodes[i];
  }
  pen.diag[n - 1] -= g;

  const double an = pen.a_nodes[0];
  const double k2 = static_cast<double>(mode_k) * mode_k;
  pen.tail_kappa = std::sqrt((epsilon + k2 * an) / (an * an * an));
  const double kappa = pen.tail_kappa;
  pen.diag[0] += (an * an * an * kappa * kappa + epsilon) / (2.0 * kappa);
  pen.mass[0] += an / (2.0 * kappa);
  return pen;
}

double quad_form(const SLPencil& pen, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += pen.diag[i] * x[i] * x[i];
    if (i + 1 < x.size()) s += 2.0 * pen.off[i] * x[i] * x[i + 1];
  }
  return s;
}

double mass_form(const SLPencil& pen, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += pen.mass[i] * x[i] * x[i];
  return s;
}

double smallest_mu(const SLPencil& pen) {
  return numerics::tridiag_eig_smallest(pen.diag, pen.off, pen.mass).value;
}

}  // namespace

SLPencil assemble_pencil(const Vorticity& vort, double lambda, double epsilon, const Grid1D& grid,
                         double g, int mode_k) {
  if (!(lambda > -2.0 * vort.gamma_inf())) {
    throw Error(ErrorKind::ParameterOutOfRange, "lambda must exceed -2 Gamma_inf");
  }
  return assemble_from(sample_gamma(vort, grid), grid, lambda, epsilon, g, mode_k);
}

DispersionPoint principal_eigenpair(const SLPencil& pencil) {
  auto ep = numerics::tridiag_eig_smallest(pencil.diag, pencil.off, pencil.mass);
  if (ep.vector.back() < 0.0) {
    for (double& v : ep.vector) v = -v;
  }
  DispersionPoint pt;
  pt.lambda = pencil.lambda;
  pt.epsilon = pencil.epsilon;
  pt.mu = ep.value;
  pt.mode_k = pencil.mode_k;
  pt.grid = pencil.grid;
  pt.psi = std::move(ep.vector);
  return pt;
}

double rayleigh_quotient(const SLPencil& pencil, std::span<const double> phi) {
  if (phi.size() != pencil.diag.size()) {
    throw Error(ErrorKind::Precondition, "trial function does not match the grid");
  }
  const double den = mass_form(pencil, phi);
  if (!(den > 0.0)) throw Error(ErrorKind::Domain, "trial function has zero weighted norm");
  return quad_form(pencil, phi) / den;
}

double rayleigh_quotient(const Vorticity& vort, double lambda, double epsilon, const Grid1D& grid,
                         std::span<const double> phi, double g) {
  return rayleigh_quotient(assemble_pencil(vort, lambda, epsilon, grid, g), phi);
}

std::vector<double> mu_scan(const Vorticity& vort, double epsilon, double g, const Grid1D& grid,
                            std::span<const double> lambdas, int mode_k) {
  const auto gs = sample_gamma(vort, grid);
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double lam : lambdas) {
    if (!(lam > -2.0 * vort.gamma_inf())) {
      throw Error(ErrorKind::ParameterOutOfRange, "lambda must exceed -2 Gamma_inf");
    }
    out.push_back(smallest_mu(assemble_from(gs, grid, lam, epsilon, g, mode_k)));
  }
  return out;
}

DispersionPoint find_bifurcation(const Vorticity& vort, double epsilon, double g, const Grid1D& grid,
                                 int mode_k, std::optional<BracketOverride> bracket) {
  const auto gs = sample_gamma(vort, grid);
  const double target = -static_cast<double>(mode_k) * mode_k;
  auto f = [&](double lam) { return smallest_mu(assemble_from(gs, grid, lam, epsilon, g, mode_k)) - target; };

  const double gi = vort.gamma_inf();
  double lo = -2.0 * gi + 1e-8 * (1.0 + std::abs(gi));
  double hi = g - 2.0 * gi;
  bool expand = true;
  if (bracket) {
    lo = std::max(lo, bracket->lo);
    hi = bracket->hi;
    expand = false;
  }
  if (!(hi > lo)) throw Error(ErrorKind::NoBifurcation, "empty bifurcation bracket");
  double flo = f(lo);
  double fhi = f(hi);
  // The constant-vorticity root sits exactly on the upper end of the bracket,
  // so a discretization error can leave it just outside.
  for (int i = 0; expand && fhi <= 0.0 && i < 8; ++i) {
    hi = lo + 1.25 * (hi - lo);
    fhi = f(hi);
  }
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw Error(ErrorKind::NoBifurcation, "mu + k^2 does not change sign on the bracket");
  }

  while (hi - lo > 1e-4 * std::abs(hi)) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double root = lo;
  if (hi > lo) {
    std::uintmax_t iters = 100;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                     boost::math::tools::eps_tolerance<double>(52), iters);
    root = 0.5 * (r.first + r.second);
  }
  return principal_eigenpair(assemble_from(gs, grid, root, epsilon, g, mode_k));
}

double mu_derivative(const DispersionPoint& point, const Vorticity& vort, double g) {
  const auto pen = assemble_pencil(vort, point.lambda, point.epsilon, point.grid, g, point.mode_k);
  const auto& p = point.grid.nodes;
  const auto& psi = point.psi;
  const auto w = trapezoid_weights(p);
  double grad = 0.0;
  double inv = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double d = psi[i + 1] - psi[i];
    grad += pen.a_mid[i] * d * d / (p[i + 1] - p[i]);
  }
  for (std::size_t i = 0; i < p.size(); ++i) inv += w[i] * psi[i] * psi[i] / pen.a_nodes[i];
  // Tail closure: T = (2 eps + k^2 a) / (2 kappa), M = a / (2 kappa), a = a(p_0), da/dlambda = 1/(2a).
  const double an = pen.a_nodes[0];
  const double kappa = pen.tail_kappa;
  const double k2 = static_cast<double>(point.mode_k) * point.mode_k;
  const double eps = point.epsilon;
  const double dkappa = (k2 / (an * an * an) - 3.0 * (eps + k2 * an) / std::pow(an, 4)) / (2.0 * kappa);
  const double dt = k2 / (2.0 * kappa) - (2.0 * eps + k2 * an) / (2.0 * kappa * kappa) * dkappa;
  const double dm = 1.0 / (2.0 * kappa) - an / (2.0 * kappa * kappa) * dkappa;
  const double tail = (dt - point.mu * dm) / (2.0 * an) * psi[0] * psi[0];
  return (1.5 * grad - 0.5 * point.mu * inv + tail) / mass_form(pen, psi);
}

Transversality transversality(const DispersionPoint& point, const Vorticity& vort, double g) {
  const auto pen = assemble_pencil(vort, point.lambda, point.epsilon, point.grid, g, point.mode_k);
  const auto& p = point.grid.nodes;
  const auto& psi = point.psi;
  const std::size_t n = p.size();
  const double eps = point.epsilon;
  const auto w = trapezoid_weights(p);

  double grad_a = 0.0;   // int a psi'^2
  double ap_cross = 0.0; // int a_p psi psi'
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = p[i + 1] - p[i];
    const double d = (psi[i + 1] - psi[i]) / h;
    const double pm = 0.5 * (p[i] + p[i + 1]);
    const double am = pen.a_mid[i];
    grad_a += am * d * d * h;
    ap_cross += vort.gamma(-pm) / am * 0.5 * (psi[i] + psi[i + 1]) * d * h;
  }
  double inv_a = 0.0;   // int psi^2 / a
  double inv_a2 = 0.0;  // int psi^2 / a^2
  for (std::size_t i = 0; i < n; ++i) {
    const double a = pen.a_nodes[i];
    inv_a += w[i] * psi[i] * psi[i] / a;
    inv_a2 += w[i] * psi[i] * psi[i] / (a * a);
  }
  const double an = pen.a_nodes[0];
  const double kappa = pen.tail_kappa;
  const double t = psi[0] * psi[0];
  grad_a += an * kappa * t / 2.0;
  inv_a += t / (2.0 * kappa * an);
  inv_a2 += t / (2.0 * kappa * an * an);
  ap_cross += vort.gamma(p.front() < 0.0 ? -p.front() : 0.0) / an * t / 2.0;

  const double psi0 = psi[n - 1];
  const double dpsi0 = g * psi0 / std::pow(point.lambda, 1.5);
  const double pi = std::numbers::pi;
  Transversality tr;
  tr.lhs = pi * (inv_a - 3.0 * ap_cross + 1.5 * eps * inv_a2 - 1.5 * std::sqrt(point.lambda) * psi0 * dpsi0);
  tr.rhs = -pi * (1.5 * grad_a + 0.5 * inv_a);
  return tr;
}

}  // namespace wavebranch
