// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "transmission.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace wavebranch {

namespace {

struct Term {
  std::size_t i;
  std::size_t j;
  double c;
};

struct Stencil {
  std::array<Term, 6> t{};
  int n = 0;
  void add(std::size_t i, std::size_t j, double c) { t[static_cast<std::size_t>(n++)] = {i, j, c}; }
  double apply(const Grid2D& g, const std::vector<double>& w) const {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += t[static_cast<std::size_t>(k)].c * w[g.field_index(t[static_cast<std::size_t>(k)].i, t[static_cast<std::size_t>(k)].j)];
    return s;
  }
};

// Index of the partial derivatives in a row's local linearization.
enum Slot { kW, kWq, kWp, kWqq, kWpp, kWqp, kSlots };

struct RowData {
  double value = 0.0;
  double dlambda = 0.0;
  std::array<Stencil, kSlots> st{};
  std::array<double, kSlots> partial{};
  int used = 0;
};

double one_sided_above(const std::vector<double>& p, std::size_t i) { return p[i + 1] - p[i]; }
double one_sided_below(const std::vector<double>& p, std::size_t i) { return p[i] - p[i - 1]; }

}  // namespace

Grid2D build_grid(const Vorticity& vort, std::size_t nq, std::size_t np_upper, std::size_t np_lower,
                  double p_max) {
  if (nq < 8) throw Error(ErrorKind::Configuration, "nq must be at least 8");
  Grid2D g;
  g.p = build_grid1d(vort, p_max, np_upper, np_lower);
  g.nq = nq;
  g.dq = std::numbers::pi / static_cast<double>(nq);
  return g;
}

TransmissionOperator::TransmissionOperator(const Vorticity& vort, Grid2D grid, double g, double delta)
    : vort_(&vort), grid_(std::move(grid)), g_(g), delta_(delta) {
  if (!(g_ > 0.0)) throw Error(ErrorKind::Configuration, "gravity must be positive");
  if (!(delta_ > 0.0)) throw Error(ErrorKind::Configuration, "margin delta must be positive");
  const auto& p = grid_.p.nodes;
  const std::size_t np = p.size();
  kinds_.assign(np, RowKind::Interior);
  kinds_[np - 1] = RowKind::Surface;
  for (std::size_t k : grid_.p.interfaces) {
    if (k < 2 || k + 2 >= np) {
      throw Error(ErrorKind::Configuration, "interface needs two grid intervals on each side");
    }
    kinds_[k] = RowKind::Interface;
  }
  big_gamma_.resize(np);
  gamma_.resize(np);
  for (std::size_t i = 0; i < np; ++i) {
    big_gamma_[i] = vort.big_gamma(p[i]);
    gamma_[i] = vort.gamma(-p[i]);
  }
}

RowKind TransmissionOperator::row_kind(std::size_t i) const { return kinds_[i]; }

bool TransmissionOperator::upper_region(std::size_t i) const {
  if (grid_.p.interfaces.empty()) return true;
  return i >= grid_.p.interfaces.back();
}

std::vector<double> TransmissionOperator::pack(const std::vector<double>& field) const {
  return {field.begin() + static_cast<std::ptrdiff_t>(grid_.width()), field.end()};
}

std::vector<double> TransmissionOperator::unpack(const std::vector<double>& unknowns) const {
  std::vector<double> f(grid_.width(), 0.0);
  f.insert(f.end(), unknowns.begin(), unknowns.end());
  return f;
}

std::vector<double> TransmissionOperator::inverse_a(double lambda) const {
  std::vector<double> out(big_gamma_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double rad = lambda + 2.0 * big_gamma_[i];
    if (!(rad > 0.0)) {
      throw Error(ErrorKind::SingularCoefficient,
                  "lambda + 2 Gamma(p) is not positive at p = " + std::to_string(grid_.p.nodes[i]));
    }
    out[i] = 1.0 / std::sqrt(rad);
  }
  return out;
}

std::vector<double> TransmissionOperator::hp_field(const WaveState& st) const {
  const auto& p = grid_.p.nodes;
  const auto ainv = inverse_a(st.lambda);
  const std::size_t np = p.size();
  std::vector<double> hp(grid_.field_size());
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j <= grid_.nq; ++j) {
      auto w = [&](std::size_t ii) { return st.w[grid_.field_index(ii, j)]; };
      double wp = 0.0;
      if (i == 0) {
        const double h = one_sided_above(p, 0);
        wp = (-3.0 * w(0) + 4.0 * w(1) - w(2)) / (2.0 * h);
      } else if (i == np - 1 || kinds_[i] == RowKind::Interface) {
        if (i == np - 1) {
          const double h = one_sided_below(p, i);
          wp = (3.0 * w(i) - 4.0 * w(i - 1) + w(i - 2)) / (2.0 * h);
        } else {
          const double h = one_sided_above(p, i);
          wp = (-3.0 * w(i) + 4.0 * w(i + 1) - w(i + 2)) / (2.0 * h);
        }
      } else {
        wp = (w(i + 1) - w(i - 1)) / (p[i + 1] - p[i - 1]);
      }
      hp[grid_.field_index(i, j)] = ainv[i] + wp;
    }
  }
  return hp;
}

Margins TransmissionOperator::margins(const WaveState& st) const {
  const auto& p = grid_.p.nodes;
  const std::size_t np = p.size();
  const auto ainv = inverse_a(st.lambda);
  Margins m{kInfinity, kInfinity, kInfinity};
  for (std::size_t i = 1; i < np; ++i) {
    for (std::size_t j = 0; j <= grid_.nq; ++j) {
      auto w = [&](std::size_t ii) { return st.w[grid_.field_index(ii, j)]; };
      if (kinds_[i] == RowKind::Interface) {
        const double up = ainv[i] + (-3.0 * w(i) + 4.0 * w(i + 1) - w(i + 2)) / (2.0 * one_sided_above(p, i));
        const double dn = ainv[i] + (3.0 * w(i) - 4.0 * w(i - 1) + w(i - 2)) / (2.0 * one_sided_below(p, i));
        double& above = upper_region(i + 1) ? m.upper : m.lower;
        above = std::min(above, up - delta_);
        m.lower = std::min(m.lower, dn - delta_);
        continue;
      }
      double wp = 0.0;
      if (kinds_[i] == RowKind::Surface) {
        wp = (3.0 * w(i) - 4.0 * w(i - 1) + w(i - 2)) / (2.0 * one_sided_below(p, i));
        m.surface = std::min(m.surface, (2.0 * st.lambda - delta_) / (4.0 * g_) - w(i));
      } else {
        wp = (w(i + 1) - w(i - 1)) / (p[i + 1] - p[i - 1]);
      }
      double& slot = upper_region(i) ? m.upper : m.lower;
      slot = std::min(slot, ainv[i] + wp - delta_);
    }
  }
  return m;
}

void TransmissionOperator::check_margins(const WaveState& st) const {
  if (st.w.size() != grid_.field_size()) throw Error(ErrorKind::Precondition, "state does not match grid");
  const auto& p = grid_.p.nodes;
  const std::size_t np = p.size();
  const auto ainv = inverse_a(st.lambda);
  auto fail = [&](int which, std::size_t i, std::size_t j) {
    static const char* names[] = {"", "h_p > delta in the upper region", "h_p > delta in the lower region",
                                  "w < (2 lambda - delta)/(4g) on the surface"};
    throw MarginError(which, i, j,
                      std::string("state leaves the admissible set: ") + names[which] + " fails at p = " +
                          std::to_string(p[i]) + ", q = " + std::to_string(grid_.q(j)));
  };
  for (std::size_t i = 1; i < np; ++i) {
    for (std::size_t j = 0; j <= grid_.nq; ++j) {
      auto w = [&](std::size_t ii) { return st.w[grid_.field_index(ii, j)]; };
      if (!std::isfinite(w(i))) throw Error(ErrorKind::NumericalFailure, "non-finite state");
      if (kinds_[i] == RowKind::Interface) {
        const double up = ainv[i] + (-3.0 * w(i) + 4.0 * w(i + 1) - w(i + 2)) / (2.0 * one_sided_above(p, i));
        const double dn = ainv[i] + (3.0 * w(i) - 4.0 * w(i - 1) + w(i - 2)) / (2.0 * one_sided_below(p, i));
        if (!(up > delta_)) fail(upper_region(i + 1) ? 1 : 2, i, j);
        if (!(dn > delta_)) fail(2, i, j);
        continue;
      }
      double wp = 0.0;
      if (kinds_[i] == RowKind::Surface) {
        wp = (3.0 * w(i) - 4.0 * w(i - 1) + w(i - 2)) / (2.0 * one_sided_below(p, i));
      } else {
        wp = (w(i + 1) - w(i - 1)) / (p[i + 1] - p[i - 1]);
      }
      if (!(ainv[i] + wp > delta_)) fail(upper_region(i) ? 1 : 2, i, j);
      if (kinds_[i] == RowKind::Surface && !(w(i) < (2.0 * st.lambda - delta_) / (4.0 * g_))) fail(3, i, j);
    }
  }
}

template <class Sink>
void TransmissionOperator::assemble(const WaveState& st, Sink& sink) const {
  check_margins(st);
  const auto& p = grid_.p.nodes;
  const std::size_t np = p.size();
  const std::size_t nq = grid_.nq;
  const double dq = grid_.dq;
  const double lam = st.lambda;
  const double eps = st.epsilon;
  const auto ainv = inverse_a(lam);
  const double a0 = 1.0 / std::sqrt(lam);

  RowData rd;
  for (std::size_t i = 1; i < np; ++i) {
    for (std::size_t j = 0; j <= nq; ++j) {
      const std::size_t jm = j == 0 ? 1 : j - 1;
      const std::size_t jp = j == nq ? nq - 1 : j + 1;
      for (auto& s : rd.st) s.n = 0;
      rd.partial.fill(0.0);
      rd.dlambda = 0.0;

      if (kinds_[i] == RowKind::Interface) {
        const double ha = one_sided_above(p, i);
        const double hb = one_sided_below(p, i);
        auto& s = rd.st[kWp];
        s.add(i, j, -3.0 / (2.0 * ha) - 3.0 / (2.0 * hb));
        s.add(i + 1, j, 4.0 / (2.0 * ha));
        s.add(i + 2, j, -1.0 / (2.0 * ha));
        s.add(i - 1, j, 4.0 / (2.0 * hb));
        s.add(i - 2, j, -1.0 / (2.0 * hb));
        rd.partial[kWp] = 1.0;
        rd.value = s.apply(grid_, st.w);
        sink(grid_.unknown_index(i, j), rd);
        continue;
      }

      rd.st[kW].add(i, j, 1.0);
      rd.st[kWq].add(i, jp, 0.5 / dq);
      rd.st[kWq].add(i, jm, -0.5 / dq);
      const double W = st.w[grid_.field_index(i, j)];
      const double Wq = rd.st[kWq].apply(grid_, st.w);

      if (kinds_[i] == RowKind::Surface) {
        const double h = one_sided_below(p, i);
        rd.st[kWp].add(i, j, 3.0 / (2.0 * h));
        rd.st[kWp].add(i - 1, j, -4.0 / (2.0 * h));
        rd.st[kWp].add(i - 2, j, 1.0 / (2.0 * h));
        const double Wp = rd.st[kWp].apply(grid_, st.w);
        const double hp = a0 + Wp;
        const double b = 2.0 * g_ * W - lam;
        rd.value = 1.0 + b * hp * hp + Wq * Wq;
        rd.partial[kW] = 2.0 * g_ * hp * hp;
        rd.partial[kWp] = 2.0 * b * hp;
        rd.partial[kWq] = 2.0 * Wq;
        rd.dlambda = -hp * hp + b * 2.0 * hp * (-0.5 * a0 * a0 * a0);
        sink(grid_.unknown_index(i, j), rd);
        continue;
      }

      const double h = p[i + 1] - p[i];
      rd.st[kWp].add(i + 1, j, 0.5 / h);
      rd.st[kWp].add(i - 1, j, -0.5 / h);
      rd.st[kWqq].add(i, jp, 1.0 / (dq * dq));
      rd.st[kWqq].add(i, j, -2.0 / (dq * dq));
      rd.st[kWqq].add(i, jm, 1.0 / (dq * dq));
      rd.st[kWpp].add(i + 1, j, 1.0 / (h * h));
      rd.st[kWpp].add(i, j, -2.0 / (h * h));
      rd.st[kWpp].add(i - 1, j, 1.0 / (h * h));
      const double c = 1.0 / (4.0 * h * dq);
      rd.st[kWqp].add(i + 1, jp, c);
      rd.st[kWqp].add(i + 1, jm, -c);
      rd.st[kWqp].add(i - 1, jp, -c);
      rd.st[kWqp].add(i - 1, jm, c);

      const double Wp = rd.st[kWp].apply(grid_, st.w);
      const double Wqq = rd.st[kWqq].apply(grid_, st.w);
      const double Wpp = rd.st[kWpp].apply(grid_, st.w);
      const double Wqp = rd.st[kWqp].apply(grid_, st.w);
      const double A = ainv[i];
      const double gam = gamma_[i];
      const double hp = A + Wp;
      const double A3 = A * A * A;
      const double qq = 1.0 + Wq * Wq;
      rd.value = qq * Wpp - 2.0 * hp * Wq * Wqp + hp * hp * Wqq + gam * hp * hp * hp - gam * A3 * qq -
                 eps * A3 * W;
      rd.partial[kW] = -eps * A3;
      rd.partial[kWq] = 2.0 * Wq * Wpp - 2.0 * hp * Wqp - 2.0 * gam * A3 * Wq;
      rd.partial[kWp] = -2.0 * Wq * Wqp + 2.0 * hp * Wqq + 3.0 * gam * hp * hp;
      rd.partial[kWqq] = hp * hp;
      rd.partial[kWpp] = qq;
      rd.partial[kWqp] = -2.0 * hp * Wq;
      const double dA = -2.0 * Wq * Wqp + 2.0 * hp * Wqq + 3.0 * gam * hp * hp - 3.0 * gam * A * A * qq -
                        3.0 * eps * A * A * W;
      rd.dlambda = dA * (-0.5 * A3);
      sink(grid_.unknown_index(i, j), rd);
    }
  }
}

std::vector<double> TransmissionOperator::residual(const WaveState& st) const {
  std::vector<double> r(grid_.unknowns());
  auto sink = [&](std::size_t row, const RowData& rd) { r[row] = rd.value; };
  assemble(st, sink);
  for (double v : r) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NumericalFailure, "non-finite residual");
  }
  return r;
}

Linearization TransmissionOperator::jacobian(const WaveState& st) const {
  const std::size_t band = 2 * grid_.width();
  Linearization lin{numerics::BandedMatrix(grid_.unknowns(), band, band),
                    std::vector<double>(grid_.unknowns(), 0.0)};
  auto sink = [&](std::size_t row, const RowData& rd) {
    for (int s = 0; s < kSlots; ++s) {
      const double d = rd.partial[static_cast<std::size_t>(s)];
      if (d == 0.0) continue;
      const auto& sten = rd.st[static_cast<std::size_t>(s)];
      for (int k = 0; k < sten.n; ++k) {
        const auto& t = sten.t[static_cast<std::size_t>(k)];
        if (t.i == 0) continue;
        lin.jw.add(row, grid_.unknown_index(t.i, t.j), d * t.c);
      }
    }
    lin.jlambda[row] = rd.dlambda;
  };
  assemble(st, sink);
  return lin;
}

ModeOperator TransmissionOperator::mode_operator(double lambda, double epsilon) const {
  const auto& p = grid_.p.nodes;
  const std::size_t np = p.size();
  const std::size_t m = np - 1;
  ModeOperator op{numerics::BandedMatrix(m, 2, 2), numerics::BandedMatrix(m, 2, 2)};
  const auto ainv = inverse_a(lambda);
  const double dq = grid_.dq;
  const double k2 = (2.0 - 2.0 * std::cos(dq)) / (dq * dq);
  auto put = [&](numerics::BandedMatrix& mat, std::size_t row_node, std::size_t col_node, double v) {
    if (col_node == 0) return;
    mat.add(row_node - 1, col_node - 1, v);
  };
  for (std::size_t i = 1; i < np; ++i) {
    if (kinds_[i] == RowKind::Interface) {
      const double ha = one_sided_above(p, i);
      const double hb = one_sided_below(p, i);
      put(op.m, i, i, -1.5 / ha - 1.5 / hb);
      put(op.m, i, i + 1, 2.0 / ha);
      put(op.m, i, i + 2, -0.5 / ha);
      put(op.m, i, i - 1, 2.0 / hb);
      put(op.m, i, i - 2, -0.5 / hb);
      continue;
    }
    if (kinds_[i] == RowKind::Surface) {
      const double h = one_sided_below(p, i);
      const double sl = std::sqrt(lambda);
      put(op.m, i, i, 2.0 * g_ / lambda - 2.0 * sl * 1.5 / h);
      put(op.m, i, i - 1, -2.0 * sl * (-2.0 / h));
      put(op.m, i, i - 2, -2.0 * sl * (0.5 / h));
      put(op.m_lambda, i, i, -2.0 * g_ / (lambda * lambda) - (1.0 / sl) * 1.5 / h);
      put(op.m_lambda, i, i - 1, -(1.0 / sl) * (-2.0 / h));
      put(op.m_lambda, i, i - 2, -(1.0 / sl) * (0.5 / h));
      continue;
    }
    const double h = p[i + 1] - p[i];
    const double A = ainv[i];
    const double A2 = A * A;
    const double gam = gamma_[i];
    put(op.m, i, i + 1, 1.0 / (h * h) + 3.0 * gam * A2 * 0.5 / h);
    put(op.m, i, i - 1, 1.0 / (h * h) - 3.0 * gam * A2 * 0.5 / h);
    put(op.m, i, i, -2.0 / (h * h) - k2 * A2 - epsilon * A2 * A);
    put(op.m_lambda, i, i + 1, -3.0 * gam * A2 * A2 * 0.5 / h);
    put(op.m_lambda, i, i - 1, 3.0 * gam * A2 * A2 * 0.5 / h);
    put(op.m_lambda, i, i, k2 * A2 * A2 + 1.5 * epsilon * A2 * A2 * A);
  }
  return op;
}

double TransmissionOperator::surface_residual(const WaveState& st) const {
  const auto r = residual(st);
  double m = 0.0;
  const std::size_t i = grid_.np() - 1;
  for (std::size_t j = 0; j <= grid_.nq; ++j) m = std::max(m, std::abs(r[grid_.unknown_index(i, j)]));
  return m;
}

double TransmissionOperator::interface_residual(const WaveState& st) const {
  const auto r = residual(st);
  double m = 0.0;
  for (std::size_t k : grid_.p.interfaces) {
    for (std::size_t j = 0; j <= grid_.nq; ++j) m = std::max(m, std::abs(r[grid_.unknown_index(k, j)]));
  }
  return m;
}

std::vector<double> weak_residual(const TransmissionOperator& op, const WaveState& st,
                                  const std::vector<Bump>& bumps) {
  const auto& grid = op.grid();
  const auto& p = grid.p.nodes;
  const std::size_t np = p.size();
  const std::size_t nq = grid.nq;
  const double dq = grid.dq;
  const auto hp = op.hp_field(st);
  const Vorticity& vort = op.vorticity();

  std::vector<double> wp(np, 0.0);  // trapezoid weights in p
  for (std::size_t i = 0; i + 1 < np; ++i) {
    wp[i] += 0.5 * (p[i + 1] - p[i]);
    wp[i + 1] += 0.5 * (p[i + 1] - p[i]);
  }
  std::vector<double> big_gamma(np);
  for (std::size_t i = 0; i < np; ++i) big_gamma[i] = vort.big_gamma(p[i]);

  std::vector<double> out;
  for (const auto& b : bumps) {
    if (!(b.radius > 0.0) || b.center + b.radius >= 0.0 || b.center - b.radius <= p.front()) {
      throw Error(ErrorKind::Precondition, "bump support must lie strictly inside the strip");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
      const double t = (p[i] - b.center) / b.radius;
      if (std::abs(t) >= 1.0) continue;
      const double u = 1.0 - t * t;
      const double phi_p_fac = u * u * u * u;
      const double dphi_p_fac = 4.0 * u * u * u * (-2.0 * t / b.radius);
      for (std::size_t j = 0; j <= nq; ++j) {
        const double q = grid.q(j);
        const double cq = std::cos(b.mode * q);
        const double sq = -b.mode * std::sin(b.mode * q);
        const std::size_t jm = j == 0 ? 1 : j - 1;
        const std::size_t jp = j == nq ? nq - 1 : j + 1;
        const double hq = (st.w[grid.field_index(i, jp)] - st.w[grid.field_index(i, jm)]) / (2.0 * dq);
        const double hpv = hp[grid.field_index(i, j)];
        const double flux_q = hq / hpv;
        const double flux_p = (1.0 + hq * hq) / (2.0 * hpv * hpv) - big_gamma[i];
        const double wq = (j == 0 || j == nq) ? 0.5 * dq : dq;
        sum += wq * wp[i] * (flux_q * phi_p_fac * sq - flux_p * dphi_p_fac * cq);
      }
    }
    out.push_back(sum);
  }
  return out;
}

}  // namespace wavebranch
