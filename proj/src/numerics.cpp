// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace wavebranch::numerics {

namespace {

constexpr double kSingularPivot = 1e-14;

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(std::min(kl, n ? n - 1 : 0)), ku_(std::min(ku, n ? n - 1 : 0)) {
  data_.assign(ld() * n_, 0.0);
}

bool BandedMatrix::in_band(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) return false;
  return (j <= i + ku_) && (i <= j + kl_);
}

double BandedMatrix::get(std::size_t i, std::size_t j) const {
  return in_band(i, j) ? data_[offset(i, j)] : 0.0;
}

void BandedMatrix::set(std::size_t i, std::size_t j, double v) {
  if (!in_band(i, j)) {
    throw Error(ErrorKind::Precondition, "band write outside (" + std::to_string(i) + "," +
                                             std::to_string(j) + ")");
  }
  data_[offset(i, j)] = v;
}

void BandedMatrix::add(std::size_t i, std::size_t j, double v) {
  if (!in_band(i, j)) {
    throw Error(ErrorKind::Precondition, "band write outside (" + std::to_string(i) + "," +
                                             std::to_string(j) + ")");
  }
  data_[offset(i, j)] += v;
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t i0 = j > ku_ ? j - ku_ : 0;
    const std::size_t i1 = std::min(n_ - 1, j + kl_);
    for (std::size_t i = i0; i <= i1; ++i) y[i] += data_[offset(i, j)] * x[j];
  }
  return y;
}

double BandedMatrix::max_abs() const { return inf_norm(data_); }

BandedLU::BandedLU(BandedMatrix m, PivotPolicy policy) : lu_(std::move(m)) {
  const std::size_t n = lu_.n_;
  const std::size_t kl = lu_.kl_;
  const std::size_t ku = lu_.ku_;
  const std::size_t kv = kl + ku;
  const std::size_t ld = lu_.ld();
  double* ab = lu_.data_.data();
  auto at = [&](std::size_t i, std::size_t j) -> double& { return ab[kv + i - j + j * ld]; };

  const double scale = std::max(lu_.max_abs(), std::numeric_limits<double>::min());
  pivots_.resize(n);
  std::size_t ju = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t km = std::min(kl, n - 1 - j);
    std::size_t jp = 0;
    double best = std::abs(at(j, j));
    for (std::size_t r = 1; r <= km; ++r) {
      const double v = std::abs(at(j + r, j));
      if (v > best) {
        best = v;
        jp = r;
      }
    }
    pivots_[j] = j + jp;
    if (best < kSingularPivot * scale) {
      if (policy == PivotPolicy::Strict) {
        throw Error(ErrorKind::SingularMatrix,
                    "singular pivot in banded LU at column " + std::to_string(j));
      }
      regularized_ = true;
      const double sign = at(j + jp, j) < 0.0 ? -1.0 : 1.0;
      at(j + jp, j) = sign * std::sqrt(std::numeric_limits<double>::epsilon()) * scale;
    }
    ju = std::max(ju, std::min(j + ku + jp, n - 1));
    if (jp != 0) {
      for (std::size_t c = j; c <= ju; ++c) std::swap(at(j, c), at(j + jp, c));
    }
    const double pivot = at(j, j);
    for (std::size_t r = 1; r <= km; ++r) at(j + r, j) /= pivot;
    for (std::size_t c = j + 1; c <= ju; ++c) {
      const double t = at(j, c);
      if (t == 0.0) continue;
      for (std::size_t r = 1; r <= km; ++r) at(j + r, c) -= at(j + r, j) * t;
    }
  }
}

std::vector<double> BandedLU::solve(std::span<const double> rhs) const {
  const std::size_t n = lu_.n_;
  if (rhs.size() != n) throw Error(ErrorKind::Precondition, "rhs size mismatch in banded solve");
  const std::size_t kl = lu_.kl_;
  const std::size_t kv = kl + lu_.ku_;
  const std::size_t ld = lu_.ld();
  const double* ab = lu_.data_.data();
  auto at = [&](std::size_t i, std::size_t j) { return ab[kv + i - j + j * ld]; };

  std::vector<double> b(rhs.begin(), rhs.end());
  for (std::size_t j = 0; j < n; ++j) {
    if (pivots_[j] != j) std::swap(b[j], b[pivots_[j]]);
    const std::size_t km = std::min(kl, n - 1 - j);
    const double bj = b[j];
    if (bj == 0.0) continue;
    for (std::size_t r = 1; r <= km; ++r) b[j + r] -= at(j + r, j) * bj;
  }
  for (std::size_t jj = n; jj-- > 0;) {
    b[jj] /= at(jj, jj);
    const double bj = b[jj];
    if (bj == 0.0) continue;
    const std::size_t i0 = jj > kv ? jj - kv : 0;
    for (std::size_t i = i0; i < jj; ++i) b[i] -= at(i, jj) * bj;
  }
  return b;
}

std::vector<double> banded_lu_solve(const BandedMatrix& m, std::span<const double> rhs) {
  return BandedLU(m).solve(rhs);
}

BorderedSolution bordered_solve(const BandedMatrix& m, std::span<const double> border_col,
                                std::span<const double> border_row, double corner,
                                std::span<const double> f, double g) {
  const std::size_t n = m.size();
  if (border_col.size() != n || border_row.size() != n || f.size() != n) {
    throw Error(ErrorKind::Precondition, "bordered system size mismatch");
  }
  const BandedLU lu(m, PivotPolicy::Regularize);
  const std::vector<double> v = lu.solve(border_col);
  const double denom = corner - dot(border_row, v);
  const double scale =
      std::max({m.max_abs(), inf_norm(border_col), inf_norm(border_row), std::abs(corner)});
  if (!(std::abs(denom) > 1e-300) || !std::isfinite(denom)) {
    throw Error(ErrorKind::SingularMatrix, "bordered system is singular");
  }

  BorderedSolution sol{std::vector<double>(n, 0.0), 0.0};
  std::vector<double> rf(f.begin(), f.end());
  double rg = g;
  const double rhs_norm = std::max(inf_norm(f), std::abs(g));
  if (rhs_norm == 0.0) return sol;

  double last = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 12; ++iter) {
    const std::vector<double> u = lu.solve(rf);
    const double dy = (rg - dot(border_row, u)) / denom;
    for (std::size_t i = 0; i < n; ++i) sol.x[i] += u[i] - v[i] * dy;
    sol.y += dy;

    const std::vector<double> mx = m.multiply(sol.x);
    for (std::size_t i = 0; i < n; ++i) rf[i] = f[i] - mx[i] - border_col[i] * sol.y;
    rg = g - dot(border_row, sol.x) - corner * sol.y;
    const double res = std::max(inf_norm(rf), std::abs(rg));
    const double sol_norm = std::max(inf_norm(sol.x), std::abs(sol.y));
    if (!std::isfinite(res)) break;
    if (res <= 4.0 * std::numeric_limits<double>::epsilon() * (rhs_norm + scale * sol_norm)) {
      return sol;
    }
    // Stagnation at a level already acceptable for a backward-stable solve.
    if (res >= 0.5 * last && res <= 1e-11 * (rhs_norm + scale * sol_norm)) return sol;
    last = res;
  }
  const std::vector<double> mx = m.multiply(sol.x);
  double res = std::abs(g - dot(border_row, sol.x) - corner * sol.y);
  for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(f[i] - mx[i] - border_col[i] * sol.y));
  const double sol_norm = std::max(inf_norm(sol.x), std::abs(sol.y));
  if (std::isfinite(res) && res <= 1e-9 * (rhs_norm + scale * sol_norm)) return sol;
  throw Error(ErrorKind::SingularMatrix, "bordered system is singular or too ill-conditioned");
}

std::size_t tridiag_count_below(std::span<const double> diag, std::span<const double> off,
                                std::span<const double> b_diag, double x) {
  const std::size_t n = diag.size();
  std::size_t count = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < n; ++i) {
    q = (diag[i] - x * b_diag[i]) - (i ? off[i - 1] * off[i - 1] / q : 0.0);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

TridiagEigenpair tridiag_eig_smallest(std::span<const double> diag, std::span<const double> off,
                                      std::span<const double> b_diag) {
  const std::size_t n = diag.size();
  if (n == 0 || off.size() + 1 != n || b_diag.size() != n) {
    throw Error(ErrorKind::Precondition, "tridiagonal pencil has inconsistent sizes");
  }
  for (double b : b_diag) {
    if (!(b > 0.0)) throw Error(ErrorKind::Precondition, "mass matrix must be positive diagonal");
  }

  // Gershgorin discs of B^{-1/2} A B^{-1/2}.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]) / std::sqrt(b_diag[i] * b_diag[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]) / std::sqrt(b_diag[i] * b_diag[i + 1]);
    const double c = diag[i] / b_diag[i];
    lo = std::min(lo, c - r);
    hi = std::max(hi, c + r);
  }
  const double span_width = hi - lo;
  lo -= 1e-3 * span_width + 1e-300;
  hi += 1e-3 * span_width + 1e-300;

  int iterations = 0;
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    if (++iterations > 4000) {
      throw Error(ErrorKind::NumericalFailure, "inertia bisection did not converge");
    }
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (tridiag_count_below(diag, off, b_diag, mid) >= 1) hi = mid;
    else lo = mid;
  }
  // A - lo B is positive definite (no eigenvalue below lo), so the
  // unpivoted LDL^T factorization is stable; only its last pivots are small.
  const double shift = lo - 1e-10 * std::max(1.0, std::abs(lo));
  std::vector<double> piv(n);
  std::vector<double> mult(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    double d = diag[i] - shift * b_diag[i];
    if (i > 0) d -= mult[i - 1] * off[i - 1];
    const double floor_piv = std::numeric_limits<double>::epsilon() *
                             (std::abs(diag[i]) + std::abs(shift * b_diag[i]) + (i > 0 ? std::abs(off[i - 1]) : 0.0));
    if (std::abs(d) < floor_piv) d = floor_piv;
    piv[i] = d;
    if (i + 1 < n) mult[i] = off[i] / d;
  }
  auto ldl_solve = [&](std::vector<double> y) {
    for (std::size_t i = 1; i < n; ++i) y[i] -= mult[i - 1] * y[i - 1];
    for (std::size_t i = 0; i < n; ++i) y[i] /= piv[i];
    for (std::size_t i = n - 1; i-- > 0;) y[i] -= mult[i] * y[i + 1];
    return y;
  };

  auto b_normalize = [&](std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += b_diag[i] * v[i] * v[i];
    const double inv = 1.0 / std::sqrt(s);
    for (double& x : v) x *= inv;
  };

  std::vector<double> x(n, 1.0);
  b_normalize(x);
  for (int it = 0; it < 8; ++it) {
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = b_diag[i] * x[i];
    std::vector<double> y = ldl_solve(std::move(rhs));
    for (double v : y) {
      if (!std::isfinite(v)) throw Error(ErrorKind::NumericalFailure, "inverse iteration diverged");
    }
    b_normalize(y);
    // Fix the sign so successive iterates are comparable.
    double align = 0.0;
    for (std::size_t i = 0; i < n; ++i) align += b_diag[i] * x[i] * y[i];
    if (align < 0.0) {
      for (double& v : y) v = -v;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(y[i] - x[i]));
    x = std::move(y);
    if (it >= 1 && change < 1e-13 * std::max(1.0, inf_norm(x))) break;
  }

  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += diag[i] * x[i] * x[i];
    if (i + 1 < n) num += 2.0 * off[i] * x[i] * x[i + 1];
  }
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) den += b_diag[i] * x[i] * x[i];
  return {num / den, std::move(x)};
}

}  // namespace wavebranch::numerics
