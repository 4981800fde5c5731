// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "vorticity.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "error.hpp"

namespace wavebranch {

namespace {

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

std::vector<double> trimmed(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

double bisect_root(const std::vector<double>& c, double lo, double hi) {
  double flo = horner(c, lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = horner(c, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Real roots of a polynomial in [lo, hi], isolated between critical points.
std::vector<double> roots_in(const std::vector<double>& coeffs, double lo, double hi) {
  const auto c = trimmed(coeffs);
  if (c.size() <= 1 || !(hi > lo)) return {};
  std::vector<double> knots{lo};
  for (double x : roots_in(derivative(c), lo, hi)) knots.push_back(x);
  knots.push_back(hi);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double fa = horner(c, knots[i]);
    const double fb = horner(c, knots[i + 1]);
    if (fa == 0.0) out.push_back(knots[i]);
    else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) out.push_back(bisect_root(c, knots[i], knots[i + 1]));
  }
  if (horner(c, hi) == 0.0) out.push_back(hi);
  return out;
}

double cauchy_bound(const std::vector<double>& coeffs) {
  const auto c = trimmed(coeffs);
  if (c.size() <= 1) return 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i] / c.back()));
  return 1.0 + m;
}

bool all_zero(const std::vector<double>& c) {
  return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

double eval_kind(const VorticitySegment& seg, double s) {
  if (const auto* pe = std::get_if<PolyExp>(&seg.kind)) {
    const double poly = horner(pe->coeffs, s);
    return pe->decay == 0.0 ? poly : poly * std::exp(-pe->decay * s);
  }
  const auto& rd = std::get<RationalDecay>(seg.kind);
  return rd.amplitude * std::pow(1.0 + s, -rd.exponent);
}

}  // namespace

Vorticity::Vorticity(std::vector<VorticitySegment> segments, double decay_exponent)
    : segments_(std::move(segments)), r_(decay_exponent) {
  if (segments_.empty()) throw Error(ErrorKind::Configuration, "vorticity needs at least one segment");
  if (!(r_ > 0.0) || !std::isfinite(r_)) {
    throw Error(ErrorKind::Configuration, "decay exponent r must be positive");
  }
  if (segments_.front().s_lo != 0.0) {
    throw Error(ErrorKind::Configuration, "first vorticity segment must start at s = 0");
  }
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& seg = segments_[k];
    const bool last = k + 1 == segments_.size();
    if (!(seg.s_hi > seg.s_lo)) {
      throw Error(ErrorKind::Configuration, "vorticity breakpoints must increase strictly");
    }
    if (last != std::isinf(seg.s_hi)) {
      throw Error(ErrorKind::Configuration, "only the final vorticity segment may be unbounded");
    }
    if (!last && segments_[k + 1].s_lo != seg.s_hi) {
      throw Error(ErrorKind::Configuration, "vorticity segments must be contiguous");
    }
    if (const auto* pe = std::get_if<PolyExp>(&seg.kind)) {
      if (!(pe->decay >= 0.0) || !std::isfinite(pe->decay)) {
        throw Error(ErrorKind::Configuration, "polynomial-exponential decay rate must be >= 0");
      }
      if (last && pe->decay == 0.0 && !all_zero(pe->coeffs)) {
        throw Error(ErrorKind::Admissibility, "vorticity tail is not integrable");
      }
    } else {
      const auto& rd = std::get<RationalDecay>(seg.kind);
      if (!std::isfinite(rd.amplitude) || !std::isfinite(rd.exponent)) {
        throw Error(ErrorKind::Configuration, "rational segment parameters must be finite");
      }
      if (last && rd.exponent <= 1.0 && rd.amplitude != 0.0) {
        throw Error(ErrorKind::Admissibility, "vorticity tail is not integrable");
      }
    }
  }

  cumulative_.resize(segments_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    cumulative_[k] = acc;
    if (k + 1 < segments_.size()) acc += integral_from_lo(k, segments_[k].s_hi);
  }
  total_ = acc + tail_integral(segments_.size() - 1);
  gamma_infinity_ = total_ == 0.0 ? 0.0 : -total_;

  // Gamma_inf = -sup_s int_0^s gamma, attained at s = 0, at a breakpoint, at a
  // zero of gamma, or in the limit s -> inf.
  double sup_cum = std::max(0.0, total_);
  double sup_g = 0.0;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& seg = segments_[k];
    const bool last = k + 1 == segments_.size();
    std::vector<double> zeros;
    std::vector<double> crit;
    sup_g = k == 0 ? eval_kind(seg, seg.s_lo) : std::max(sup_g, eval_kind(seg, seg.s_lo));
    if (!last) {
      sup_cum = std::max(sup_cum, cumulative_[k + 1]);
      sup_g = std::max(sup_g, eval_kind(seg, seg.s_hi));
    } else {
      sup_g = std::max(sup_g, 0.0);
    }
    if (const auto* pe = std::get_if<PolyExp>(&seg.kind)) {
      const double hi = last ? std::max(seg.s_lo, cauchy_bound(pe->coeffs)) : seg.s_hi;
      zeros = roots_in(pe->coeffs, seg.s_lo, hi);
      // Critical points of P(s) exp(-k s) are the zeros of P' - k P.
      auto dp = derivative(pe->coeffs);
      dp.resize(std::max(dp.size(), pe->coeffs.size()), 0.0);
      for (std::size_t i = 0; i < pe->coeffs.size(); ++i) dp[i] -= pe->decay * pe->coeffs[i];
      const double hic = last ? std::max(seg.s_lo, cauchy_bound(dp)) : seg.s_hi;
      crit = roots_in(dp, seg.s_lo, hic);
    }
    for (double z : zeros) sup_cum = std::max(sup_cum, cumulative_[k] + integral_from_lo(k, z));
    for (double z : crit) sup_g = std::max(sup_g, eval_kind(seg, z));
  }
  gamma_inf_ = sup_cum == 0.0 ? 0.0 : -sup_cum;
  sup_gamma_ = sup_g;

  // Decay hypothesis |gamma| <= C s^{-2-r}: structural test on the tail basis,
  // confirmed by a sampled envelope that must stay bounded.
  const auto& tail = segments_.back();
  bool structural = false;
  if (const auto* pe = std::get_if<PolyExp>(&tail.kind)) {
    structural = pe->decay > 0.0 || all_zero(pe->coeffs);
  } else {
    const auto& rd = std::get<RationalDecay>(tail.kind);
    structural = rd.amplitude == 0.0 || rd.exponent >= 2.0 + r_;
  }
  const double s_a = std::max(1e4, 10.0 * tail.s_lo);
  const double s_b = 1e4 * s_a;
  const double env_a = std::abs(gamma(s_a)) * std::pow(s_a, 2.0 + r_);
  const double env_b = std::abs(gamma(s_b)) * std::pow(s_b, 2.0 + r_);
  decay_ok_ = structural && std::isfinite(env_b) && env_b <= 1.01 * env_a + 1e-300;
}

std::size_t Vorticity::segment_index(double s) const {
  std::size_t k = 0;
  while (k + 1 < segments_.size() && s >= segments_[k + 1].s_lo) ++k;
  return k;
}

double Vorticity::gamma(double s) const {
  if (!(s >= 0.0)) throw Error(ErrorKind::Domain, "vorticity evaluated at negative stream coordinate");
  return eval_kind(segments_[segment_index(s)], s);
}

double Vorticity::gamma_left(double s) const {
  if (!(s > 0.0)) return gamma(s);
  const std::size_t k = segment_index(s);
  if (k > 0 && segments_[k].s_lo == s) return eval_kind(segments_[k - 1], s);
  return eval_kind(segments_[k], s);
}

double Vorticity::integral_from_lo(std::size_t k, double s) const {
  const auto& seg = segments_[k];
  const double a = seg.s_lo;
  if (s <= a) return 0.0;
  if (const auto* pe = std::get_if<PolyExp>(&seg.kind)) {
    if (pe->decay == 0.0) {
      std::vector<double> anti(pe->coeffs.size() + 1, 0.0);
      for (std::size_t i = 0; i < pe->coeffs.size(); ++i) anti[i + 1] = pe->coeffs[i] / static_cast<double>(i + 1);
      return horner(anti, s) - horner(anti, a);
    }
    auto f = [&](double t) { return horner(pe->coeffs, t) * std::exp(-pe->decay * t); };
    return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, s, 6, 1e-13);
  }
  const auto& rd = std::get<RationalDecay>(seg.kind);
  if (rd.exponent == 1.0) return rd.amplitude * std::log((1.0 + s) / (1.0 + a));
  const double e = 1.0 - rd.exponent;
  return rd.amplitude * (std::pow(1.0 + s, e) - std::pow(1.0 + a, e)) / e;
}

double Vorticity::tail_integral(std::size_t k) const {
  const auto& seg = segments_[k];
  const double a = seg.s_lo;
  if (const auto* pe = std::get_if<PolyExp>(&seg.kind)) {
    if (all_zero(pe->coeffs)) return 0.0;
    // I_i = int_a^inf t^i e^{-kt} dt = (a^i e^{-ka} + i I_{i-1}) / k
    const double kappa = pe->decay;
    const double ea = std::exp(-kappa * a);
    double ii = ea / kappa;
    double sum = pe->coeffs.empty() ? 0.0 : pe->coeffs[0] * ii;
    double apow = 1.0;
    for (std::size_t i = 1; i < pe->coeffs.size(); ++i) {
      apow *= a;
      ii = (apow * ea + static_cast<double>(i) * ii) / kappa;
      sum += pe->coeffs[i] * ii;
    }
    return sum;
  }
  const auto& rd = std::get<RationalDecay>(seg.kind);
  if (rd.amplitude == 0.0) return 0.0;
  return rd.amplitude * std::pow(1.0 + a, 1.0 - rd.exponent) / (rd.exponent - 1.0);
}

double Vorticity::big_gamma(double p) const {
  if (!(p <= 0.0)) throw Error(ErrorKind::Domain, "Gamma evaluated at positive height p");
  if (p == 0.0) return 0.0;
  const double s = -p;
  const std::size_t k = segment_index(s);
  return -(cumulative_[k] + integral_from_lo(k, s));
}

std::vector<double> Vorticity::breakpoints() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < segments_.size(); ++k) out.push_back(-segments_[k].s_lo);
  return out;
}

double coefficient_a(const Vorticity& vort, double lambda, double p) {
  const double rad = lambda + 2.0 * vort.big_gamma(p);
  if (!(rad > 0.0)) {
    throw Error(ErrorKind::SingularCoefficient,
                "lambda + 2 Gamma(p) is not positive at p = " + std::to_string(p));
  }
  return std::sqrt(rad);
}

AdmissibilityReport check_admissible(const Vorticity& vort, double g) {
  AdmissibilityReport rep;
  rep.decay_ok = vort.decay_ok();
  rep.margin = std::pow(g, 2.0 / 3.0) / 4.0 + vort.gamma_inf();
  rep.gamma_inf_ok = rep.margin > 0.0;
  return rep;
}

}  // namespace wavebranch
