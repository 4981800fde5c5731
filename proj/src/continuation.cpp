// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "continuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "diagnostics.hpp"
#include "error.hpp"
#include "laminar.hpp"
#include "numerics.hpp"

namespace wavebranch {

namespace {

constexpr int kMaxRetries = 5;

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const auto k = static_cast<std::size_t>(it - xs.begin());
  if (xs[k] == x) return ys[k];
  const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return (1.0 - t) * ys[k - 1] + t * ys[k];
}

// Euclidean inner product on (w, lambda) used for arclength.
double pair_dot(const std::vector<double>& a, double la, const std::vector<double>& b, double lb) {
  double s = la * lb;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::SpeedUnbounded: return "SpeedUnbounded";
    case Termination::StagnationApproach: return "StagnationApproach";
    case Termination::MarginHit: return "MarginHit";
    case Termination::NewtonFailure: return "NewtonFailure";
    case Termination::MaxSteps: return "MaxSteps";
    case Termination::NodalPatternLost: return "NodalPatternLost";
  }
  return "unknown";
}

std::vector<double> mode_field(const Grid2D& grid, const std::vector<double>& phi) {
  std::vector<double> f(grid.field_size());
  for (std::size_t i = 0; i < grid.np(); ++i) {
    for (std::size_t j = 0; j <= grid.nq; ++j) f[grid.field_index(i, j)] = phi[i] * std::cos(grid.q(j));
  }
  return f;
}

WaveState initial_guess(const Grid2D& grid, const DispersionPoint& point, double s0) {
  std::vector<double> phi(grid.np());
  for (std::size_t i = 0; i < grid.np(); ++i) {
    phi[i] = s0 * interpolate(point.grid.nodes, point.psi, grid.p.nodes[i]);
  }
  phi.front() = 0.0;
  return {point.lambda, point.epsilon, mode_field(grid, phi)};
}

KernelMode refine_kernel(const TransmissionOperator& op, const DispersionPoint& point, double epsilon) {
  const auto& grid = op.grid();
  const std::size_t m = grid.np() - 1;
  std::vector<double> phi(m);
  for (std::size_t i = 1; i <= m; ++i) phi[i - 1] = interpolate(point.grid.nodes, point.psi, grid.p.nodes[i]);
  const double target = phi.back();
  double lambda = point.lambda;

  bool converged = false;
  for (int it = 0; it < 40 && !converged; ++it) {
    const auto mo = op.mode_operator(lambda, epsilon);
    auto r = mo.m.multiply(phi);
    const auto col = mo.m_lambda.multiply(phi);
    std::vector<double> row(m, 0.0);
    row.back() = 1.0;
    for (double& v : r) v = -v;
    const auto sol = numerics::bordered_solve(mo.m, col, row, 0.0, r, target - phi.back());
    for (std::size_t k = 0; k < m; ++k) phi[k] += sol.x[k];
    lambda += sol.y;
    converged = std::abs(sol.y) <= 1e-14 * std::abs(lambda) && inf_norm(sol.x) <= 1e-13 * inf_norm(phi);
  }
  if (!converged) throw Error(ErrorKind::NumericalFailure, "discrete kernel refinement did not converge");
  KernelMode km;
  km.lambda = lambda;
  km.epsilon = epsilon;
  km.phi.assign(1, 0.0);
  km.phi.insert(km.phi.end(), phi.begin(), phi.end());
  return km;
}

Constraint fix_lambda(const TransmissionOperator& op, double lambda) {
  return {std::vector<double>(op.grid().unknowns(), 0.0), 1.0, lambda};
}

Constraint fix_amplitude(const TransmissionOperator& op, const KernelMode& kernel, double s) {
  auto row = op.pack(mode_field(op.grid(), kernel.phi));
  double nn = 0.0;
  for (double v : row) nn += v * v;
  for (double& v : row) v /= nn;
  return {std::move(row), 0.0, s};
}

NewtonResult newton_correct(const TransmissionOperator& op, WaveState start, const Constraint& con,
                            const ContinuationConfig& cfg) {
  NewtonResult res;
  res.state = std::move(start);
  auto x = op.pack(res.state.w);
  for (int it = 0;; ++it) {
    const auto r = op.residual(res.state);
    double cres = con.lambda_coef * res.state.lambda - con.rhs;
    for (std::size_t k = 0; k < x.size(); ++k) cres += con.row[k] * x[k];
    const double norm = inf_norm(r);
    res.history.push_back(norm);
    if (norm <= cfg.newton_tol && std::abs(cres) <= cfg.newton_tol) {
      res.iterations = it;
      return res;
    }
    if (it >= cfg.max_newton) {
      throw Error(ErrorKind::NewtonFailure, "Newton did not converge in " + std::to_string(cfg.max_newton) +
                                                " iterations (residual " + std::to_string(norm) + ")");
    }
    if (it >= 3 && norm > 1e6 * res.history.front() + 1.0) {
      throw Error(ErrorKind::NewtonFailure, "Newton iteration diverged");
    }
    const auto lin = op.jacobian(res.state);
    std::vector<double> f(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) f[k] = -r[k];
    numerics::BorderedSolution sol;
    try {
      sol = numerics::bordered_solve(lin.jw, lin.jlambda, con.row, con.lambda_coef, f, -cres);
    } catch (const Error& e) {
      throw Error(ErrorKind::NewtonFailure, std::string("Newton step failed: ") + e.what());
    }
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += sol.x[k];
    res.state.lambda += sol.y;
    res.state.w = op.unpack(x);
  }
}

NewtonResult solve_at_amplitude(const TransmissionOperator& op, const KernelMode& kernel, double s,
                                const ContinuationConfig& cfg) {
  auto phi = kernel.phi;
  for (double& v : phi) v *= s;
  WaveState start{kernel.lambda, kernel.epsilon, mode_field(op.grid(), phi)};
  return newton_correct(op, std::move(start), fix_amplitude(op, kernel, s), cfg);
}

BranchPoint describe_point(const TransmissionOperator& op, const WaveState& st, int step, double s,
                           int iterations) {
  const auto& grid = op.grid();
  BranchPoint bp;
  bp.step = step;
  bp.s = s;
  bp.lambda = st.lambda;
  bp.c = wave_speed(st.lambda, op.vorticity().gamma_infinity());
  const std::size_t m = grid.np() - 1;
  bp.amplitude = st.w[grid.field_index(m, 0)] - st.w[grid.field_index(m, grid.nq)];
  const auto hp = op.hp_field(st);
  bp.max_hp = *std::max_element(hp.begin(), hp.end());
  const auto audit = audit_state(op, st);
  bp.surface_residual = audit.surface;
  bp.interface_residual = audit.interface;
  bp.mean_drift = audit.mean_drift;
  bp.nodal_ok = check_nodal(grid, st).pass();
  try {
    bp.tau_fit = fit_decay(grid, st).tau;
  } catch (const Error&) {
    bp.tau_fit = std::numeric_limits<double>::quiet_NaN();
  }
  bp.newton_iters = iterations;
  return bp;
}

Branch run_branch(const TransmissionOperator& op, const DispersionPoint& point, const ContinuationConfig& cfg) {
  const auto kernel = refine_kernel(op, point, cfg.epsilon);
  Branch br;
  br.lambda_bifurcation = kernel.lambda;

  auto first = solve_at_amplitude(op, kernel, cfg.s0, cfg);
  const std::size_t n = op.grid().unknowns();

  // Returns true when the branch must stop at this accepted point.
  auto accept = [&](const WaveState& st, double s, int iters) {
    const int step = static_cast<int>(br.points.size());
    const auto bp = describe_point(op, st, step, s, iters);
    if (!bp.nodal_ok) {
      br.reason = Termination::NodalPatternLost;
      const auto rep = check_nodal(op.grid(), st);
      br.detail = "nodal pattern fails at step " + std::to_string(step) + ":";
      if (!rep.interior_wq) br.detail += " interior_wq";
      if (!rep.left_wqq) br.detail += " left_wqq";
      if (!rep.right_wqq) br.detail += " right_wqq";
      if (!rep.corner_left) br.detail += " corner_left";
      if (!rep.corner_right) br.detail += " corner_right";
      return true;
    }
    br.points.push_back(bp);
    br.states.push_back(st);
    if (bp.lambda > cfg.lambda_max) {
      br.reason = Termination::SpeedUnbounded;
      return true;
    }
    if (bp.max_hp > cfg.hp_max) {
      br.reason = Termination::StagnationApproach;
      return true;
    }
    if (static_cast<int>(br.points.size()) >= cfg.max_steps) {
      br.reason = Termination::MaxSteps;
      return true;
    }
    return false;
  };

  if (accept(first.state, cfg.s0, first.iterations)) return br;

  auto prev_x = std::vector<double>(n, 0.0);
  double prev_l = kernel.lambda;
  auto cur_x = op.pack(first.state.w);
  double cur_l = first.state.lambda;
  double s = cfg.s0;
  double ds = cfg.ds;

  while (true) {
    std::vector<double> tx(n);
    for (std::size_t k = 0; k < n; ++k) tx[k] = cur_x[k] - prev_x[k];
    double tl = cur_l - prev_l;
    const double tn = std::sqrt(pair_dot(tx, tl, tx, tl));
    for (double& v : tx) v /= tn;
    tl /= tn;

    bool done = false;
    int failures = 0;
    while (!done) {
      std::vector<double> xp(n);
      for (std::size_t k = 0; k < n; ++k) xp[k] = cur_x[k] + ds * tx[k];
      const double lp = cur_l + ds * tl;
      Constraint con;
      con.row.resize(n);
      for (std::size_t k = 0; k < n; ++k) con.row[k] = tx[k];
      con.lambda_coef = tl;
      con.rhs = pair_dot(tx, tl, xp, lp);
      try {
        auto res = newton_correct(op, WaveState{lp, cfg.epsilon, op.unpack(xp)}, con, cfg);
        auto nx = op.pack(res.state.w);
        std::vector<double> d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = nx[k] - cur_x[k];
        const double dl = res.state.lambda - cur_l;
        s += std::sqrt(pair_dot(d, dl, d, dl));
        prev_x = std::move(cur_x);
        prev_l = cur_l;
        cur_x = std::move(nx);
        cur_l = res.state.lambda;
        if (accept(res.state, s, res.iterations)) return br;
        if (res.iterations <= 3) ds = std::min(ds * 1.3, cfg.ds_max);
        done = true;
      } catch (const MarginError& e) {
        if (++failures > kMaxRetries || ds / 2.0 < cfg.ds_min) {
          br.reason = Termination::MarginHit;
          br.margin_inequality = e.inequality();
          br.detail = e.what();
          return br;
        }
        ds /= 2.0;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NewtonFailure && e.kind() != ErrorKind::SingularCoefficient &&
            e.kind() != ErrorKind::NumericalFailure && e.kind() != ErrorKind::SingularMatrix) {
          throw;
        }
        if (++failures > kMaxRetries || ds / 2.0 < cfg.ds_min) {
          br.reason = Termination::NewtonFailure;
          br.detail = e.what();
          return br;
        }
        ds /= 2.0;
      }
    }
  }
}

std::string branch_csv(const Branch& br) {
  std::string out =
      "step,s,lambda,c,amplitude,max_hp,surface_residual,interface_residual,nodal_ok,tau_fit,mean_drift,"
      "newton_iters\n";
  char buf[512];
  for (const auto& p : br.points) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%d\n", p.step, p.s,
                  p.lambda, p.c, p.amplitude, p.max_hp, p.surface_residual, p.interface_residual, p.nodal_ok ? 1 : 0,
                  p.tau_fit, p.mean_drift, p.newton_iters);
    out += buf;
  }
  out += "# termination: ";
  out += to_string(br.reason);
  if (br.reason == Termination::MarginHit) out += "(" + std::to_string(br.margin_inequality) + ")";
  out += "\n";
  return out;
}

HomotopyTable epsilon_homotopy(const Vorticity& vort, double g, const Grid1D& grid,
                               const std::vector<double>& schedule, int mode_k) {
  HomotopyTable table;
  double base = std::numeric_limits<double>::quiet_NaN();
  for (double eps : schedule) {
    HomotopyRow row;
    row.epsilon = eps;
    try {
      row.lambda = find_bifurcation(vort, eps, g, grid, mode_k).lambda;
      row.ok = true;
      if (eps == 0.0) base = row.lambda;
    } catch (const Error& e) {
      row.message = e.what();
    }
    table.rows.push_back(row);
  }
  // Least-squares slope of log|lambda^eps - lambda^0| against log eps.
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : table.rows) {
    if (r.ok && r.epsilon > 0.0 && std::isfinite(base) && r.lambda != base) {
      xs.push_back(std::log(r.epsilon));
      ys.push_back(std::log(std::abs(r.lambda - base)));
    }
  }
  table.order = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      mx += xs[k];
      my += ys[k];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxx += (xs[k] - mx) * (xs[k] - mx);
      sxy += (xs[k] - mx) * (ys[k] - my);
    }
    table.order = sxy / sxx;
  }
  return table;
}

}  // namespace wavebranch
