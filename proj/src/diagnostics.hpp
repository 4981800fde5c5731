// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "physical.hpp"
#include "transmission.hpp"

namespace wavebranch {

struct NodalReport {
  bool interior_wq = false;   // w_q < 0 for 0 < q < pi, surface and interfaces included
  bool left_wqq = false;      // w_qq < 0 on q = 0
  bool right_wqq = false;     // w_qq > 0 on q = pi
  bool corner_left = false;   // w_qq < 0 and w_qqp < 0 at (0, 0)
  bool corner_right = false;  // w_qq > 0 and w_qqp > 0 at (pi, 0)
  double lateral_wq = 0.0;    // max one-sided |w_q| on the lateral boundaries
  bool pass() const { return interior_wq && left_wqq && right_wqq && corner_left && corner_right; }
};

NodalReport check_nodal(const Grid2D& grid, const WaveState& state);

struct DecayFit {
  double tau = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;  // rms of the log-linear fit
  double p_lo = 0.0;
  double p_hi = 0.0;
};

/// Least-squares fit of log sup_q |w_q| = log N + tau p over the lower half of
/// the strip, excluding the 10% of those levels nearest the truncation.
DecayFit fit_decay(const Grid2D& grid, const WaveState& state);

/// max of 1/2((c-u)^2 + v^2) + g y - Gamma(-psi) - 1/2 max(0, sup gamma) psi.
double bernoulli_inequality(const PhysicalWave& wave, const Vorticity& vort, double g);

struct AuditReport {
  double surface = 0.0;
  double interface = 0.0;
  double mean_drift = 0.0;
  Margins margins;
  bool pass = false;
};

AuditReport audit_state(const TransmissionOperator& op, const WaveState& state, double tol = 1e-8);

/// Trapezoid mean over q of w on the surface.
double mean_drift(const Grid2D& grid, const WaveState& state);

}  // namespace wavebranch
