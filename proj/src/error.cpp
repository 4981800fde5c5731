// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "error.hpp"

namespace wavebranch {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Admissibility: return "admissibility error";
    case ErrorKind::SingularCoefficient: return "singular coefficient";
    case ErrorKind::ParameterOutOfRange: return "parameter out of range";
    case ErrorKind::Configuration: return "configuration error";
    case ErrorKind::MarginViolation: return "margin violation";
    case ErrorKind::SingularMatrix: return "singular matrix";
    case ErrorKind::NumericalFailure: return "numerical failure";
    case ErrorKind::NoBifurcation: return "no bifurcation found";
    case ErrorKind::NewtonFailure: return "Newton failure";
    case ErrorKind::DegenerateFit: return "degenerate fit";
    case ErrorKind::Stagnation: return "stagnation";
    case ErrorKind::Precondition: return "precondition violated";
  }
  return "unknown error";
}

}  // namespace wavebranch
