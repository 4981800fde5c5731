// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"
#include "vorticity.hpp"

namespace wavebranch {

namespace {

// Region edges from the bottom up: -P_max, p_n, ..., p_0, 0.
std::vector<double> region_edges(const Vorticity& vort, double p_max) {
  if (!(p_max > 0.0) || !std::isfinite(p_max)) {
    throw Error(ErrorKind::Configuration, "P_max must be positive and finite");
  }
  std::vector<double> edges{-p_max};
  auto bps = vort.breakpoints();
  std::sort(bps.begin(), bps.end());
  for (double b : bps) {
    if (!(b > -p_max)) {
      throw Error(ErrorKind::Configuration,
                  "vorticity breakpoint p = " + std::to_string(b) + " lies outside the truncated strip");
    }
    edges.push_back(b);
  }
  edges.push_back(0.0);
  return edges;
}

Grid1D fill(const std::vector<double>& edges, const std::vector<std::size_t>& counts) {
  Grid1D g;
  g.nodes.push_back(edges.front());
  for (std::size_t r = 0; r + 1 < edges.size(); ++r) {
    const double lo = edges[r];
    const double hi = edges[r + 1];
    const std::size_t n = counts[r];
    for (std::size_t i = 1; i < n; ++i) {
      g.nodes.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
    }
    g.nodes.push_back(hi);
    if (r + 2 < edges.size()) g.interfaces.push_back(g.nodes.size() - 1);
  }
  return g;
}

}  // namespace

bool Grid1D::is_interface(std::size_t i) const {
  return std::find(interfaces.begin(), interfaces.end(), i) != interfaces.end();
}

std::vector<std::pair<std::size_t, std::size_t>> Grid1D::pieces() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t k : interfaces) {
    out.emplace_back(start, k);
    start = k;
  }
  out.emplace_back(start, nodes.size() - 1);
  return out;
}

Grid1D build_grid1d(const Vorticity& vort, double p_max, std::size_t np_upper, std::size_t np_lower) {
  if (np_upper < 8 || np_lower < 8) {
    throw Error(ErrorKind::Configuration, "grid needs at least 8 intervals per region");
  }
  const auto edges = region_edges(vort, p_max);
  std::vector<std::size_t> counts(edges.size() - 1, np_upper);
  counts.front() = np_lower;
  return fill(edges, counts);
}

Grid1D build_grid1d_spacing(const Vorticity& vort, double p_max, double dp) {
  if (!(dp > 0.0)) throw Error(ErrorKind::Configuration, "grid spacing must be positive");
  const auto edges = region_edges(vort, p_max);
  std::vector<std::size_t> counts;
  for (std::size_t r = 0; r + 1 < edges.size(); ++r) {
    const double n = std::ceil((edges[r + 1] - edges[r]) / dp - 1e-9);
    counts.push_back(std::max<std::size_t>(8, static_cast<std::size_t>(n)));
  }
  return fill(edges, counts);
}

}  // namespace wavebranch
