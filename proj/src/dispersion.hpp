// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "grid.hpp"
#include "vorticity.hpp"

namespace wavebranch {

/// Discrete pencil of -(a^3 Psi')' + eps Psi = mu a Psi with the Robin surface
/// term folded into the stiffness matrix. Below -P_max the eigenfunction is
/// continued by the decaying exponential of the constant-coefficient far
/// field at mu = -k^2; its energy enters as a boundary term on node 0.
struct SLPencil {
  double lambda = 0.0;
  double epsilon = 0.0;
  double g = 0.0;
  int mode_k = 1;
  Grid1D grid;
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> mass;
  std::vector<double> a_nodes;
  std::vector<double> a_mid;
  double tail_kappa = 0.0;
};

struct DispersionPoint {
  double lambda = 0.0;
  double epsilon = 0.0;
  double mu = 0.0;
  int mode_k = 1;
  Grid1D grid;
  std::vector<double> psi;  // psi.back() > 0, sum of mass-weighted squares = 1
};

SLPencil assemble_pencil(const Vorticity& vort, double lambda, double epsilon, const Grid1D& grid,
                         double g, int mode_k = 1);

DispersionPoint principal_eigenpair(const SLPencil& pencil);

/// Quotient of the pencil's quadratic forms at the trial samples phi.
double rayleigh_quotient(const SLPencil& pencil, std::span<const double> phi);
double rayleigh_quotient(const Vorticity& vort, double lambda, double epsilon, const Grid1D& grid,
                         std::span<const double> phi, double g);

struct BracketOverride {
  double lo = 0.0;
  double hi = 0.0;
};

DispersionPoint find_bifurcation(const Vorticity& vort, double epsilon, double g, const Grid1D& grid,
                                 int mode_k = 1, std::optional<BracketOverride> bracket = {});

/// mu(lambda) sampled on a list of lambdas (one eigen solve each).
std::vector<double> mu_scan(const Vorticity& vort, double epsilon, double g, const Grid1D& grid,
                            std::span<const double> lambdas, int mode_k = 1);

double mu_derivative(const DispersionPoint& point, const Vorticity& vort, double g);

struct Transversality {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of the transversality identity, reduced by the q-integrals.
Transversality transversality(const DispersionPoint& point, const Vorticity& vort, double g);

}  // namespace wavebranch
