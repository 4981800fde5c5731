// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace wavebranch {

NodalReport check_nodal(const Grid2D& grid, const WaveState& st) {
  const std::size_t np = grid.np();
  const std::size_t nq = grid.nq;
  const double dq = grid.dq;
  auto w = [&](std::size_t i, std::size_t j) { return st.w[grid.field_index(i, j)]; };

  NodalReport rep;
  rep.interior_wq = true;
  rep.left_wqq = true;
  rep.right_wqq = true;
  for (std::size_t i = 1; i < np; ++i) {
    for (std::size_t j = 1; j < nq; ++j) {
      if (!((w(i, j + 1) - w(i, j - 1)) / (2.0 * dq) < 0.0)) rep.interior_wq = false;
    }
    // Even reflection across q = 0 and q = pi.
    if (!(2.0 * (w(i, 1) - w(i, 0)) / (dq * dq) < 0.0)) rep.left_wqq = false;
    if (!(2.0 * (w(i, nq - 1) - w(i, nq)) / (dq * dq) > 0.0)) rep.right_wqq = false;
    rep.lateral_wq = std::max({rep.lateral_wq, std::abs(-3.0 * w(i, 0) + 4.0 * w(i, 1) - w(i, 2)) / (2.0 * dq),
                               std::abs(3.0 * w(i, nq) - 4.0 * w(i, nq - 1) + w(i, nq - 2)) / (2.0 * dq)});
  }

  const std::size_t m = np - 1;
  const double h = grid.p.nodes[m] - grid.p.nodes[m - 1];
  auto wqq = [&](std::size_t i, std::size_t j) {
    const std::size_t jn = j == 0 ? 1 : nq - 1;
    return 2.0 * (w(i, jn) - w(i, j)) / (dq * dq);
  };
  auto wqqp = [&](std::size_t j) { return (3.0 * wqq(m, j) - 4.0 * wqq(m - 1, j) + wqq(m - 2, j)) / (2.0 * h); };
  rep.corner_left = wqq(m, 0) < 0.0 && wqqp(0) < 0.0;
  rep.corner_right = wqq(m, nq) > 0.0 && wqqp(nq) > 0.0;
  return rep;
}

DecayFit fit_decay(const Grid2D& grid, const WaveState& st) {
  const auto& p = grid.p.nodes;
  const double half = 0.5 * p.front();
  std::vector<std::size_t> levels;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= half) levels.push_back(i);
  }
  const auto skip = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(levels.size())));
  levels.erase(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(std::min(skip, levels.size())));
  if (levels.size() < 20) throw Error(ErrorKind::Precondition, "decay fit needs at least 20 usable p-levels");

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i : levels) {
    double sup = 0.0;
    for (std::size_t j = 1; j < grid.nq; ++j) {
      const double wq = (st.w[grid.field_index(i, j + 1)] - st.w[grid.field_index(i, j - 1)]) / (2.0 * grid.dq);
      sup = std::max(sup, std::abs(wq));
    }
    if (!(sup > 0.0)) throw Error(ErrorKind::DegenerateFit, "w_q vanishes identically on a fitted level");
    xs.push_back(p[i]);
    ys.push_back(std::log(sup));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  DecayFit fit;
  fit.tau = sxy / sxx;
  const double intercept = my - fit.tau * mx;
  fit.amplitude = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (intercept + fit.tau * xs[k]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.p_lo = xs.front();
  fit.p_hi = xs.back();
  return fit;
}

double bernoulli_inequality(const PhysicalWave& wave, const Vorticity& vort, double g) {
  const double sup_g = std::max(0.0, vort.sup_gamma());
  double worst = -kInfinity;
  for (std::size_t k = 0; k < wave.y.size(); ++k) {
    const double du = wave.c - wave.u[k];
    const double psi = wave.psi[k];
    const double lhs = 0.5 * (du * du + wave.v[k] * wave.v[k]) + g * wave.y[k] - vort.big_gamma(-psi) -
                       0.5 * sup_g * psi;
    worst = std::max(worst, lhs);
  }
  return worst;
}

double mean_drift(const Grid2D& grid, const WaveState& st) {
  const std::size_t m = grid.np() - 1;
  double s = 0.0;
  for (std::size_t j = 0; j <= grid.nq; ++j) {
    const double wt = (j == 0 || j == grid.nq) ? 0.5 : 1.0;
    s += wt * st.w[grid.field_index(m, j)];
  }
  return s / static_cast<double>(grid.nq);
}

AuditReport audit_state(const TransmissionOperator& op, const WaveState& st, double tol) {
  AuditReport rep;
  rep.margins = op.margins(st);
  const auto r = op.residual(st);
  const auto& grid = op.grid();
  const std::size_t m = grid.np() - 1;
  for (std::size_t j = 0; j <= grid.nq; ++j) {
    rep.surface = std::max(rep.surface, std::abs(r[grid.unknown_index(m, j)]));
    for (std::size_t k : grid.p.interfaces) rep.interface = std::max(rep.interface, std::abs(r[grid.unknown_index(k, j)]));
  }
  rep.mean_drift = mean_drift(grid, st);
  rep.pass = rep.surface <= tol && rep.interface <= tol && rep.margins.upper > 0.0 && rep.margins.lower > 0.0 &&
             rep.margins.surface > 0.0;
  return rep;
}

}  // namespace wavebranch
