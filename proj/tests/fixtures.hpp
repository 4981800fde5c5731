// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

#include "vorticity.hpp"

namespace fixtures {

inline constexpr double kG = 9.81;
inline constexpr double kPmax = 8.0 * std::numbers::pi;

// Zero vorticity.
inline wavebranch::Vorticity v0() {
  return wavebranch::Vorticity({{0.0, wavebranch::kInfinity, wavebranch::PolyExp{{0.0}, 0.0}}}, 1.0);
}

// gamma = 1 on [0, 1), 0 below.
inline wavebranch::Vorticity v1() {
  return wavebranch::Vorticity({{0.0, 1.0, wavebranch::PolyExp{{1.0}, 0.0}},
                                {1.0, wavebranch::kInfinity, wavebranch::PolyExp{{0.0}, 0.0}}},
                               1.0);
}

// gamma = exp(-s).
inline wavebranch::Vorticity v2() {
  return wavebranch::Vorticity({{0.0, wavebranch::kInfinity, wavebranch::PolyExp{{1.0}, 1.0}}}, 1.0);
}

}  // namespace fixtures
