// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "physical.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "laminar.hpp"

namespace wavebranch {

namespace {

// Fourth-order q-derivative of an even, 2pi-periodic row sampled on [0, pi].
double dq4(const std::vector<double>& row, std::size_t j, double dq) {
  const auto n = static_cast<long>(row.size()) - 1;
  auto at = [&](long k) {
    if (k < 0) k = -k;
    if (k > n) k = 2 * n - k;
    return row[static_cast<std::size_t>(k)];
  };
  const auto jj = static_cast<long>(j);
  return (at(jj - 2) - 8.0 * at(jj - 1) + 8.0 * at(jj + 1) - at(jj + 2)) / (12.0 * dq);
}

}  // namespace

std::vector<double> height_field(const TransmissionOperator& op, const WaveState& st) {
  const auto& grid = op.grid();
  const auto lam = make_laminar(op.vorticity(), st.lambda, op.g(), grid.p);
  std::vector<double> h(grid.field_size());
  for (std::size_t i = 0; i < grid.np(); ++i) {
    for (std::size_t j = 0; j <= grid.nq; ++j) {
      h[grid.field_index(i, j)] = lam.h[i] + st.w[grid.field_index(i, j)];
    }
  }
  return h;
}

PhysicalWave reconstruct(const TransmissionOperator& op, const WaveState& st, double p_atm) {
  const auto& grid = op.grid();
  const auto& vort = op.vorticity();
  const std::size_t np = grid.np();
  const std::size_t nq = grid.nq;
  const auto h = height_field(op, st);
  const auto hp = op.hp_field(st);
  for (double v : hp) {
    if (!(v > 0.0)) throw Error(ErrorKind::Stagnation, "h_p is not positive: flow reaches stagnation");
  }

  PhysicalWave pw;
  pw.np = np;
  pw.nx = nq + 1;
  pw.c = wave_speed(st.lambda, vort.gamma_infinity());
  const std::size_t n = grid.field_size();
  pw.x.resize(n);
  pw.y.resize(n);
  pw.u.resize(n);
  pw.v.resize(n);
  pw.pressure.resize(n);
  pw.psi.resize(n);
  double max_hp = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    const double p = grid.p.nodes[i];
    const double big_gamma = vort.big_gamma(p);
    for (std::size_t j = 0; j <= nq; ++j) {
      const std::size_t k = grid.field_index(i, j);
      const std::size_t jm = j == 0 ? 1 : j - 1;
      const std::size_t jp = j == nq ? nq - 1 : j + 1;
      const double hq = (h[grid.field_index(i, jp)] - h[grid.field_index(i, jm)]) / (2.0 * grid.dq);
      pw.x[k] = grid.q(j);
      pw.y[k] = h[k];
      pw.u[k] = pw.c - 1.0 / hp[k];
      pw.v[k] = -hq / hp[k];
      pw.psi[k] = -p;
      const double rel = (pw.u[k] - pw.c) * (pw.u[k] - pw.c) + pw.v[k] * pw.v[k];
      pw.pressure[k] = p_atm - 0.5 * rel - op.g() * pw.y[k] + big_gamma;
      max_hp = std::max(max_hp, hp[k]);
    }
  }
  pw.stagnation_margin = 1.0 / max_hp;
  for (std::size_t j = 0; j <= nq; ++j) {
    pw.x_surface.push_back(grid.q(j));
    pw.eta.push_back(h[grid.field_index(np - 1, j)]);
  }
  return pw;
}

double stagnation_margin(const TransmissionOperator& op, const WaveState& st) {
  const auto hp = op.hp_field(st);
  return 1.0 / *std::max_element(hp.begin(), hp.end());
}

std::vector<Polyline> streamlines(const TransmissionOperator& op, const WaveState& st,
                                  const std::vector<double>& levels) {
  const auto& grid = op.grid();
  const auto& p = grid.p.nodes;
  const auto h = height_field(op, st);
  std::vector<Polyline> out;
  for (double level : levels) {
    if (!(level > p.front() && level <= 0.0)) {
      throw Error(ErrorKind::Domain, "streamline level outside (-P_max, 0]");
    }
    const auto it = std::lower_bound(p.begin(), p.end(), level);
    const auto i1 = static_cast<std::size_t>(it - p.begin());
    Polyline line;
    for (std::size_t j = 0; j <= grid.nq; ++j) {
      double y = h[grid.field_index(i1, j)];
      if (p[i1] != level) {
        const std::size_t i0 = i1 - 1;
        const double t = (level - p[i0]) / (p[i1] - p[i0]);
        y = (1.0 - t) * h[grid.field_index(i0, j)] + t * y;
      }
      line.emplace_back(grid.q(j), y);
    }
    out.push_back(std::move(line));
  }
  return out;
}

SurfaceConditions surface_conditions(const TransmissionOperator& op, const WaveState& st) {
  const auto& grid = op.grid();
  const auto& p = grid.p.nodes;
  const std::size_t m = grid.np() - 1;
  const auto pw = reconstruct(op, st, 0.0);
  const auto h = height_field(op, st);
  const auto ainv = op.inverse_a(st.lambda);
  std::vector<double> row(grid.nq + 1);
  for (std::size_t j = 0; j <= grid.nq; ++j) row[j] = h[grid.field_index(m, j)];
  const double d = p[m] - p[m - 1];

  SurfaceConditions sc;
  for (std::size_t j = 0; j <= grid.nq; ++j) {
    const std::size_t k = grid.field_index(m, j);
    const double eta_x = dq4(row, j, grid.dq);
    sc.kinematic = std::max(sc.kinematic, std::abs(pw.v[k] - (pw.u[k] - pw.c) * eta_x));
    auto w = [&](std::size_t i) { return st.w[grid.field_index(i, j)]; };
    // Third-order one-sided h_p.
    const double wp = (11.0 * w(m) - 18.0 * w(m - 1) + 9.0 * w(m - 2) - 2.0 * w(m - 3)) / (6.0 * d);
    const double hp = ainv[m] + wp;
    const double hq = eta_x;
    sc.dynamic = std::max(sc.dynamic, std::abs((1.0 + hq * hq) / (hp * hp) + 2.0 * op.g() * row[j]));
  }
  return sc;
}

}  // namespace wavebranch
