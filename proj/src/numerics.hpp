// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wavebranch::numerics {

/// Square band matrix in LAPACK-style packed storage, with kl extra rows
/// reserved for the fill-in produced by partial pivoting.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const;
  double get(std::size_t i, std::size_t j) const;
  // Writes outside the band throw.
  void set(std::size_t i, std::size_t j, double v);
  void add(std::size_t i, std::size_t j, double v);

  std::vector<double> multiply(std::span<const double> x) const;
  double max_abs() const;

 private:
  friend class BandedLU;
  std::size_t ld() const { return 2 * kl_ + ku_ + 1; }
  std::size_t offset(std::size_t i, std::size_t j) const { return (kl_ + ku_ + i - j) + j * ld(); }

  std::size_t n_;
  std::size_t kl_;
  std::size_t ku_;
  std::vector<double> data_;
};

enum class PivotPolicy {
  Strict,      // tiny pivot -> SingularMatrix
  Regularize,  // tiny pivot replaced by sqrt(eps)*scale, flagged
};

class BandedLU {
 public:
  explicit BandedLU(BandedMatrix m, PivotPolicy policy = PivotPolicy::Strict);

  std::vector<double> solve(std::span<const double> rhs) const;
  bool regularized() const { return regularized_; }
  std::size_t size() const { return lu_.size(); }

 private:
  BandedMatrix lu_;
  std::vector<std::size_t> pivots_;
  bool regularized_ = false;
};

std::vector<double> banded_lu_solve(const BandedMatrix& m, std::span<const double> rhs);

struct BorderedSolution {
  std::vector<double> x;
  double y = 0.0;
};

/// Solves [M b; c^T d] [x; y] = [f; g] by block elimination on a banded
/// factorization of M, followed by iterative refinement against the full
/// bordered operator. M may be singular as long as the bordered matrix is not.
BorderedSolution bordered_solve(const BandedMatrix& m, std::span<const double> border_col,
                                std::span<const double> border_row, double corner,
                                std::span<const double> f, double g);

struct TridiagEigenpair {
  double value = 0.0;
  std::vector<double> vector;  // B-normalized
};

/// Smallest eigenvalue of the symmetric-definite pencil (A, B), A symmetric
/// tridiagonal (diag, off), B diagonal positive. Inertia bisection on A - xB
/// brackets the eigenvalue; inverse iteration recovers the vector and the
/// returned value is its Rayleigh quotient.
TridiagEigenpair tridiag_eig_smallest(std::span<const double> diag, std::span<const double> off,
                                      std::span<const double> b_diag);

/// Number of eigenvalues of (A, B) strictly below x.
std::size_t tridiag_count_below(std::span<const double> diag, std::span<const double> off,
                                std::span<const double> b_diag, double x);

}  // namespace wavebranch::numerics
