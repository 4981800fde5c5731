// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace wavebranch {

/// Failure categories shared by every module. The C API maps each onto a
/// stable integer status.
enum class ErrorKind {
  Domain,
  Admissibility,
  SingularCoefficient,
  ParameterOutOfRange,
  Configuration,
  MarginViolation,
  SingularMatrix,
  NumericalFailure,
  NoBifurcation,
  NewtonFailure,
  DegenerateFit,
  Stagnation,
  Precondition,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a state leaves the admissible set. `inequality` is 1 or 2 for
/// the lower bound on h_p in the upper or lower region, 3 for the surface
/// bound on w.
class MarginError : public Error {
 public:
  MarginError(int inequality, std::size_t p_index, std::size_t q_index, const std::string& what)
      : Error(ErrorKind::MarginViolation, what),
        inequality_(inequality),
        p_index_(p_index),
        q_index_(q_index) {}
  int inequality() const noexcept { return inequality_; }
  std::size_t p_index() const noexcept { return p_index_; }
  std::size_t q_index() const noexcept { return q_index_; }

 private:
  int inequality_;
  std::size_t p_index_;
  std::size_t q_index_;
};

}  // namespace wavebranch
