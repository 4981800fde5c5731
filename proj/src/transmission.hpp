// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "grid.hpp"
#include "numerics.hpp"
#include "vorticity.hpp"

namespace wavebranch {

/// Half-period tensor grid: q in [0, pi] uniform, p from a Grid1D. The bottom
/// row carries w = 0 and is not an unknown.
struct Grid2D {
  Grid1D p;
  std::size_t nq = 0;
  double dq = 0.0;

  std::size_t np() const { return p.size(); }
  std::size_t width() const { return nq + 1; }
  std::size_t field_size() const { return np() * width(); }
  std::size_t unknowns() const { return (np() - 1) * width(); }
  std::size_t field_index(std::size_t i, std::size_t j) const { return i * width() + j; }
  std::size_t unknown_index(std::size_t i, std::size_t j) const { return (i - 1) * width() + j; }
  double q(std::size_t j) const { return dq * static_cast<double>(j); }
};

Grid2D build_grid(const Vorticity& vort, std::size_t nq, std::size_t np_upper, std::size_t np_lower,
                  double p_max);

/// Perturbation w = h - H of the laminar flow, stored on the full grid
/// (row-major in p, q fastest) with a zero bottom row.
struct WaveState {
  double lambda = 0.0;
  double epsilon = 0.0;
  std::vector<double> w;
};

struct Margins {
  double upper = 0.0;    // min over the upper region of h_p - delta
  double lower = 0.0;    // min over the lower region of h_p - delta
  double surface = 0.0;  // min over q of (2 lambda - delta)/(4g) - w(q, 0)
};

struct Linearization {
  numerics::BandedMatrix jw;
  std::vector<double> jlambda;
};

/// The linearization of the laminar state on the mode Phi(p) cos q, written as
/// an operator on Phi (rows p_1 .. 0), with its lambda-derivative.
struct ModeOperator {
  numerics::BandedMatrix m;
  numerics::BandedMatrix m_lambda;
};

enum class RowKind { Interior, Surface, Interface };

class TransmissionOperator {
 public:
  TransmissionOperator(const Vorticity& vort, Grid2D grid, double g, double delta);

  const Grid2D& grid() const { return grid_; }
  const Vorticity& vorticity() const { return *vort_; }
  double g() const { return g_; }
  double delta() const { return delta_; }
  RowKind row_kind(std::size_t i) const;
  /// True when p-row i lies in the region above the first breakpoint.
  bool upper_region(std::size_t i) const;

  std::vector<double> pack(const std::vector<double>& field) const;
  std::vector<double> unpack(const std::vector<double>& unknowns) const;

  Margins margins(const WaveState& state) const;
  /// Throws MarginError naming the first violated inequality.
  void check_margins(const WaveState& state) const;

  std::vector<double> residual(const WaveState& state) const;
  Linearization jacobian(const WaveState& state) const;
  ModeOperator mode_operator(double lambda, double epsilon) const;

  /// a^{-1}(p_i; lambda) at every p-node.
  std::vector<double> inverse_a(double lambda) const;
  /// h_p on the full grid (one-sided from above on interface rows).
  std::vector<double> hp_field(const WaveState& state) const;

  double surface_residual(const WaveState& state) const;
  double interface_residual(const WaveState& state) const;

 private:
  template <class Sink>
  void assemble(const WaveState& state, Sink& sink) const;

  const Vorticity* vort_;
  Grid2D grid_;
  double g_;
  double delta_;
  std::vector<double> big_gamma_;
  std::vector<double> gamma_;
  std::vector<RowKind> kinds_;
};

/// Compactly supported test field phi = (1 - t^2)^4 cos(mode q), t = (p - center)/radius.
struct Bump {
  double center = 0.0;
  double radius = 0.0;
  int mode = 0;
};

std::vector<double> weak_residual(const TransmissionOperator& op, const WaveState& state,
                                  const std::vector<Bump>& bumps);

}  // namespace wavebranch
