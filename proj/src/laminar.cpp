// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "laminar.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "error.hpp"

namespace wavebranch {

namespace {

void require_range(const Vorticity& vort, double lambda) {
  if (!(lambda > -2.0 * vort.gamma_inf())) {
    throw Error(ErrorKind::ParameterOutOfRange, "lambda must exceed -2 Gamma_inf");
  }
}

// int_lo^hi a^{-1} dp over an interval free of breakpoints.
double inverse_a_integral(const Vorticity& vort, double lambda, double lo, double hi) {
  if (lo == hi) return 0.0;
  auto f = [&](double p) { return 1.0 / coefficient_a(vort, lambda, p); };
  return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, 6, 1e-13);
}

// 4th-order first derivative of samples y on the uniform nodes [b, e] at node i.
double d1_fourth(const std::vector<double>& y, std::size_t b, std::size_t e, std::size_t i, double h) {
  if (i >= b + 2 && i + 2 <= e) {
    return (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
  }
  if (i < b + 2) {
    return (-25.0 * y[i] + 48.0 * y[i + 1] - 36.0 * y[i + 2] + 16.0 * y[i + 3] - 3.0 * y[i + 4]) / (12.0 * h);
  }
  return (25.0 * y[i] - 48.0 * y[i - 1] + 36.0 * y[i - 2] - 16.0 * y[i - 3] + 3.0 * y[i - 4]) / (12.0 * h);
}

}  // namespace

double laminar_height(const Vorticity& vort, double lambda, double p, double g) {
  require_range(vort, lambda);
  if (!(p <= 0.0)) throw Error(ErrorKind::Domain, "laminar height needs p <= 0");
  double integral = 0.0;
  double top = 0.0;
  for (double b : vort.breakpoints()) {
    if (b <= p) break;
    integral -= inverse_a_integral(vort, lambda, b, top);
    top = b;
  }
  integral -= inverse_a_integral(vort, lambda, p, top);
  return integral - lambda / (2.0 * g);
}

double wave_speed(double lambda, double gamma_infinity) {
  const double rad = lambda + 2.0 * gamma_infinity;
  if (!(rad > 0.0)) throw Error(ErrorKind::ParameterOutOfRange, "lambda + 2 Gamma_infinity must be positive");
  return std::sqrt(rad);
}

LaminarFlow make_laminar(const Vorticity& vort, double lambda, double g, const Grid1D& grid) {
  require_range(vort, lambda);
  LaminarFlow flow{lambda, g, grid, {}, {}};
  const std::size_t n = grid.size();
  flow.h.assign(n, 0.0);
  flow.hp.assign(n, 0.0);
  flow.h[n - 1] = -lambda / (2.0 * g);
  for (std::size_t i = n - 1; i-- > 0;) {
    flow.h[i] = flow.h[i + 1] - inverse_a_integral(vort, lambda, grid.nodes[i], grid.nodes[i + 1]);
  }
  for (std::size_t i = 0; i < n; ++i) flow.hp[i] = 1.0 / coefficient_a(vort, lambda, grid.nodes[i]);
  return flow;
}

LaminarResidual verify_laminar(const Vorticity& vort, const LaminarFlow& flow) {
  LaminarResidual res;
  const auto& p = flow.grid.nodes;
  const std::size_t n = p.size();
  const double hp0 = flow.hp[n - 1];
  res.surface = std::abs(1.0 + 2.0 * flow.g * flow.h[n - 1] * hp0 * hp0);

  for (auto [b, e] : flow.grid.pieces()) {
    if (e - b < 4) throw Error(ErrorKind::Precondition, "laminar check needs 5 nodes per smooth piece");
    const double h = (p[e] - p[b]) / static_cast<double>(e - b);
    for (std::size_t i = b; i <= e; ++i) {
      const double s = -p[i];
      // The deep end of a piece sits on a breakpoint whose right-limit belongs
      // to the next piece down.
      const double gam = (i == b && b > 0) ? vort.gamma_left(s) : vort.gamma(s);
      const double hpp = d1_fourth(flow.hp, b, e, i, h);
      res.ode = std::max(res.ode, std::abs(hpp + gam * std::pow(flow.hp[i], 3)));
    }
  }

  for (std::size_t k : flow.grid.interfaces) {
    const double above = flow.h[k];
    const double below = flow.h[k - 1] + inverse_a_integral(vort, flow.lambda, p[k - 1], p[k]);
    res.jump_h.push_back(std::abs(above - below));
    // One-sided derivatives of H from each adjacent piece.
    const double ha = p[k + 1] - p[k];
    const double hb = p[k] - p[k - 1];
    const double d_above = (-25.0 * flow.h[k] + 48.0 * flow.h[k + 1] - 36.0 * flow.h[k + 2] +
                            16.0 * flow.h[k + 3] - 3.0 * flow.h[k + 4]) / (12.0 * ha);
    const double d_below = (25.0 * flow.h[k] - 48.0 * flow.h[k - 1] + 36.0 * flow.h[k - 2] -
                            16.0 * flow.h[k - 3] + 3.0 * flow.h[k - 4]) / (12.0 * hb);
    res.jump_hp.push_back(std::abs(d_above - d_below));
  }
  return res;
}

}  // namespace wavebranch
