// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavebranch/wavebranch.h"

namespace wbcli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Segment {
  double s_lo = 0.0;
  double s_hi = 0.0;
  wbr_piece_kind kind = WBR_PIECE_POLYEXP;
  std::vector<double> coeffs;
  double rate = 0.0;
  double amplitude = 0.0;
  double exponent = 0.0;
};

struct RunConfig {
  double g = 9.81;
  double p_atm = 0.0;
  double decay_exponent = 1.0;
  std::vector<Segment> segments;
  wbr_grid_params grid{};
  double delta = 1e-4;
  double epsilon = 0.0;
  int mode_k = 1;
  std::optional<std::pair<double, double>> bracket;
  wbr_continuation continuation{};
  std::vector<double> schedule{1e-2, 1e-3, 1e-4, 0.0};
  std::string output_dir = "wavebranch_out";
};

/// Applies "a.b.c=value" to the document; value is parsed as JSON, else taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates the document and fills defaults; unknown keys are errors.
RunConfig parse_config(const nlohmann::json& doc);

}  // namespace wbcli
