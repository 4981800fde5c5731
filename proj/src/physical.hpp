// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "transmission.hpp"

namespace wavebranch {

/// Physical-plane fields on the image of the grid (row-major in p, q fastest).
struct PhysicalWave {
  std::size_t np = 0;
  std::size_t nx = 0;
  double c = 0.0;
  double stagnation_margin = 0.0;
  std::vector<double> x_surface;
  std::vector<double> eta;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> pressure;
  std::vector<double> psi;
};

/// h = H + w on the full grid.
std::vector<double> height_field(const TransmissionOperator& op, const WaveState& state);

PhysicalWave reconstruct(const TransmissionOperator& op, const WaveState& state, double p_atm);

double stagnation_margin(const TransmissionOperator& op, const WaveState& state);

using Polyline = std::vector<std::pair<double, double>>;
std::vector<Polyline> streamlines(const TransmissionOperator& op, const WaveState& state,
                                  const std::vector<double>& levels);

struct SurfaceConditions {
  double kinematic = 0.0;  // max |v - (u - c) eta_x|
  double dynamic = 0.0;    // max |(u - c)^2 + v^2 + 2 g eta|
};

/// Surface conditions of the reconstructed wave, re-differentiated with
/// higher-order stencils than the solver uses.
SurfaceConditions surface_conditions(const TransmissionOperator& op, const WaveState& state);

}  // namespace wavebranch
