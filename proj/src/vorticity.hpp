// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <variant>
#include <vector>

namespace wavebranch {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// gamma(s) = (c_0 + c_1 s + ... + c_m s^m) exp(-decay * s)
struct PolyExp {
  std::vector<double> coeffs;
  double decay = 0.0;
};

/// gamma(s) = amplitude * (1 + s)^(-exponent)
struct RationalDecay {
  double amplitude = 0.0;
  double exponent = 0.0;
};

struct VorticitySegment {
  double s_lo = 0.0;
  double s_hi = kInfinity;
  std::variant<PolyExp, RationalDecay> kind;
};

struct AdmissibilityReport {
  bool decay_ok = false;
  bool gamma_inf_ok = false;
  double margin = 0.0;  // g^{2/3}/4 + Gamma_inf
  bool pass() const { return decay_ok && gamma_inf_ok; }
};

/// Piecewise smooth vorticity on the stream coordinate s = -p >= 0. Segments
/// partition [0, inf); at a breakpoint the right-hand segment wins.
class Vorticity {
 public:
  Vorticity(std::vector<VorticitySegment> segments, double decay_exponent);

  const std::vector<VorticitySegment>& segments() const { return segments_; }
  double decay_exponent() const { return r_; }

  double gamma(double s) const;
  /// Left limit of gamma at s > 0 (differs from gamma(s) only at breakpoints).
  double gamma_left(double s) const;
  /// Gamma(p) = int_0^p gamma(-s) ds, p <= 0.
  double big_gamma(double p) const;
  double gamma_inf() const { return gamma_inf_; }
  double gamma_infinity() const { return gamma_infinity_; }
  /// sup of gamma over s >= 0 (one-sided limits included).
  double sup_gamma() const { return sup_gamma_; }
  bool decay_ok() const { return decay_ok_; }

  /// Jump locations in p, ordered p_0 > p_1 > ... (all strictly negative).
  std::vector<double> breakpoints() const;

 private:
  std::size_t segment_index(double s) const;
  double integral_from_lo(std::size_t k, double s) const;
  double tail_integral(std::size_t k) const;

  std::vector<VorticitySegment> segments_;
  double r_;
  std::vector<double> cumulative_;  // int_0^{s_lo_k} gamma
  double total_ = 0.0;
  double gamma_inf_ = 0.0;
  double gamma_infinity_ = 0.0;
  double sup_gamma_ = 0.0;
  bool decay_ok_ = false;
};

/// a(p; lambda) = sqrt(lambda + 2 Gamma(p)); throws SingularCoefficient when
/// the radicand is not positive.
double coefficient_a(const Vorticity& vort, double lambda, double p);

AdmissibilityReport check_admissible(const Vorticity& vort, double g);

}  // namespace wavebranch
