// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dispersion.hpp"
#include "transmission.hpp"

namespace wavebranch {

struct ContinuationConfig {
  double s0 = 1e-3;
  double ds = 1e-2;
  double ds_min = 1e-4;
  double ds_max = 0.5;
  double newton_tol = 1e-10;
  int max_newton = 20;
  int max_steps = 200;
  double delta = 1e-4;
  double lambda_max = 1e3;
  double hp_max = 1e3;
  double epsilon = 0.0;
  std::vector<double> eps_schedule{0.0};
};

enum class Termination {
  SpeedUnbounded,
  StagnationApproach,
  MarginHit,
  NewtonFailure,
  MaxSteps,
  NodalPatternLost,
};

const char* to_string(Termination t) noexcept;

struct BranchPoint {
  int step = 0;
  double s = 0.0;
  double lambda = 0.0;
  double c = 0.0;
  double amplitude = 0.0;
  double max_hp = 0.0;
  double surface_residual = 0.0;
  double interface_residual = 0.0;
  bool nodal_ok = false;
  double tau_fit = 0.0;
  double mean_drift = 0.0;
  int newton_iters = 0;
};

struct Branch {
  double lambda_bifurcation = 0.0;
  std::vector<BranchPoint> points;
  std::vector<WaveState> states;
  Termination reason = Termination::MaxSteps;
  int margin_inequality = 0;  // set when reason is MarginHit
  std::string detail;
};

/// Null vector Phi(p) cos q of the discrete linearization at w = 0 together
/// with the discrete bifurcation value of lambda.
struct KernelMode {
  double lambda = 0.0;
  double epsilon = 0.0;
  std::vector<double> phi;  // on the p-nodes, phi.front() = 0
};

KernelMode refine_kernel(const TransmissionOperator& op, const DispersionPoint& point, double epsilon);

/// Phi(p) cos q on the full grid.
std::vector<double> mode_field(const Grid2D& grid, const std::vector<double>& phi);

/// w = s0 Psi(p) cos q with Psi interpolated from the dispersion grid.
WaveState initial_guess(const Grid2D& grid, const DispersionPoint& point, double s0);

/// Linear side condition row . w + lambda_coef * lambda = rhs (row over unknowns).
struct Constraint {
  std::vector<double> row;
  double lambda_coef = 0.0;
  double rhs = 0.0;
};

Constraint fix_lambda(const TransmissionOperator& op, double lambda);
/// <phi cos q, w> / <phi cos q, phi cos q> = s
Constraint fix_amplitude(const TransmissionOperator& op, const KernelMode& kernel, double s);

struct NewtonResult {
  WaveState state;
  int iterations = 0;
  std::vector<double> history;  // residual infinity norms, one per evaluation
};

NewtonResult newton_correct(const TransmissionOperator& op, WaveState start, const Constraint& constraint,
                            const ContinuationConfig& cfg);

/// Converged state on the branch at kernel amplitude s.
NewtonResult solve_at_amplitude(const TransmissionOperator& op, const KernelMode& kernel, double s,
                                const ContinuationConfig& cfg);

BranchPoint describe_point(const TransmissionOperator& op, const WaveState& state, int step, double s,
                           int iterations);

Branch run_branch(const TransmissionOperator& op, const DispersionPoint& point, const ContinuationConfig& cfg);

std::string branch_csv(const Branch& branch);

struct HomotopyRow {
  double epsilon = 0.0;
  double lambda = 0.0;
  bool ok = false;
  std::string message;
};

struct HomotopyTable {
  std::vector<HomotopyRow> rows;
  double order = 0.0;  // fitted exponent of |lambda^eps - lambda^0| in eps; NaN if unavailable
};

HomotopyTable epsilon_homotopy(const Vorticity& vort, double g, const Grid1D& grid,
                               const std::vector<double>& schedule, int mode_k = 1);

}  // namespace wavebranch
