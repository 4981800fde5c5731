// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "grid.hpp"
#include "vorticity.hpp"

namespace wavebranch {

/// Trivial solution H(p; lambda) sampled on a p-grid.
struct LaminarFlow {
  double lambda = 0.0;
  double g = 0.0;
  Grid1D grid;
  std::vector<double> h;
  std::vector<double> hp;  // 1 / a(p; lambda)
};

/// H(p) = int_0^p a^{-1} ds - lambda / (2g).
double laminar_height(const Vorticity& vort, double lambda, double p, double g);
double wave_speed(double lambda, double gamma_infinity);

LaminarFlow make_laminar(const Vorticity& vort, double lambda, double g, const Grid1D& grid);

struct LaminarResidual {
  double ode = 0.0;      // max |H_pp + gamma(-p) H_p^3|
  double surface = 0.0;  // |1 + 2g H(0) H_p(0)^2|
  std::vector<double> jump_h;
  std::vector<double> jump_hp;
};

LaminarResidual verify_laminar(const Vorticity& vort, const LaminarFlow& flow);

}  // namespace wavebranch
