// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace wavebranch {

class Vorticity;

/// Truncated p-grid on [-P_max, 0], ascending, with a node on every vorticity
/// breakpoint.
struct Grid1D {
  std::vector<double> nodes;
  std::vector<std::size_t> interfaces;  // node indices of the breakpoints, ascending

  std::size_t size() const { return nodes.size(); }
  double p_max() const { return -nodes.front(); }
  bool is_interface(std::size_t i) const;
  /// Start/end node index of every smooth piece, bottom piece first.
  std::vector<std::pair<std::size_t, std::size_t>> pieces() const;
};

/// Regions between breakpoints (and the surface) get np_upper intervals each,
/// the bottom region np_lower.
Grid1D build_grid1d(const Vorticity& vort, double p_max, std::size_t np_upper, std::size_t np_lower);

/// Uniform-as-possible grid with spacing at most dp in every region.
Grid1D build_grid1d_spacing(const Vorticity& vort, double p_max, double dp);

}  // namespace wavebranch
