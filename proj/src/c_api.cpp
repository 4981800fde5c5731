// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavebranch/wavebranch.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <numbers>
#include <new>
#include <optional>
#include <string>

#include "continuation.hpp"
#include "error.hpp"
#include "laminar.hpp"
#include "physical.hpp"

using namespace wavebranch;

struct wbr_vorticity {
  std::shared_ptr<const Vorticity> v;
};

struct wbr_problem {
  std::shared_ptr<const Vorticity> v;
  double g;
  std::unique_ptr<TransmissionOperator> op;
};

struct wbr_branch {
  Branch b;
};

struct wbr_wave {
  PhysicalWave w;
  SurfaceConditions sc;
};

namespace {

thread_local std::string last_error;

wbr_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return WBR_ERR_DOMAIN;
    case ErrorKind::Admissibility: return WBR_ERR_ADMISSIBILITY;
    case ErrorKind::SingularCoefficient: return WBR_ERR_SINGULAR_COEFFICIENT;
    case ErrorKind::ParameterOutOfRange: return WBR_ERR_PARAMETER_RANGE;
    case ErrorKind::Configuration: return WBR_ERR_CONFIG;
    case ErrorKind::MarginViolation: return WBR_ERR_MARGIN;
    case ErrorKind::SingularMatrix: return WBR_ERR_SINGULAR_MATRIX;
    case ErrorKind::NumericalFailure: return WBR_ERR_NUMERICAL;
    case ErrorKind::NoBifurcation: return WBR_ERR_NO_BIFURCATION;
    case ErrorKind::NewtonFailure: return WBR_ERR_NEWTON;
    case ErrorKind::DegenerateFit: return WBR_ERR_DEGENERATE_FIT;
    case ErrorKind::Stagnation: return WBR_ERR_STAGNATION;
    case ErrorKind::Precondition: return WBR_ERR_PRECONDITION;
  }
  return WBR_ERR_INTERNAL;
}

template <class F>
wbr_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return WBR_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return WBR_ERR_INTERNAL;
}

wbr_status invalid(const char* what) {
  last_error = what;
  return WBR_ERR_INVALID_ARGUMENT;
}

std::optional<BracketOverride> bracket_of(const double* b) {
  if (b == nullptr) return std::nullopt;
  return BracketOverride{b[0], b[1]};
}

ContinuationConfig config_of(const wbr_continuation& c) {
  ContinuationConfig cfg;
  cfg.s0 = c.s0;
  cfg.ds = c.ds;
  cfg.ds_min = c.ds_min;
  cfg.ds_max = c.ds_max;
  cfg.newton_tol = c.newton_tol;
  cfg.max_newton = c.max_newton;
  cfg.max_steps = c.max_steps;
  cfg.lambda_max = c.lambda_max;
  cfg.hp_max = c.hp_max;
  cfg.epsilon = c.epsilon;
  return cfg;
}

}  // namespace

extern "C" {

const char* wbr_version(void) { return "0.1.0"; }

const char* wbr_status_string(wbr_status s) {
  switch (s) {
    case WBR_OK: return "ok";
    case WBR_ERR_DOMAIN: return "domain";
    case WBR_ERR_ADMISSIBILITY: return "admissibility";
    case WBR_ERR_SINGULAR_COEFFICIENT: return "singular-coefficient";
    case WBR_ERR_PARAMETER_RANGE: return "parameter-out-of-range";
    case WBR_ERR_CONFIG: return "configuration";
    case WBR_ERR_MARGIN: return "margin-violation";
    case WBR_ERR_SINGULAR_MATRIX: return "singular-matrix";
    case WBR_ERR_NUMERICAL: return "numerical-failure";
    case WBR_ERR_NO_BIFURCATION: return "no-bifurcation";
    case WBR_ERR_NEWTON: return "newton-failure";
    case WBR_ERR_DEGENERATE_FIT: return "degenerate-fit";
    case WBR_ERR_STAGNATION: return "stagnation";
    case WBR_ERR_PRECONDITION: return "precondition";
    case WBR_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case WBR_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    case WBR_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* wbr_last_error(void) { return last_error.c_str(); }

const char* wbr_termination_string(wbr_termination r) {
  return to_string(static_cast<Termination>(r));
}

wbr_status wbr_vorticity_create(const wbr_segment* segs, size_t n, double r, wbr_vorticity** out) {
  if (out == nullptr || (segs == nullptr && n > 0)) return invalid("null argument");
  *out = nullptr;
  return guard([&] {
    std::vector<VorticitySegment> pieces;
    for (size_t k = 0; k < n; ++k) {
      const auto& s = segs[k];
      VorticitySegment vs;
      vs.s_lo = s.s_lo;
      vs.s_hi = s.s_hi;
      if (s.kind == WBR_PIECE_POLYEXP) {
        if (s.coeffs == nullptr && s.n_coeffs > 0) throw Error(ErrorKind::Configuration, "null coefficients");
        vs.kind = PolyExp{std::vector<double>(s.coeffs, s.coeffs + s.n_coeffs), s.rate};
      } else if (s.kind == WBR_PIECE_RATIONAL) {
        vs.kind = RationalDecay{s.amplitude, s.exponent};
      } else {
        throw Error(ErrorKind::Configuration, "unknown piece kind");
      }
      pieces.push_back(std::move(vs));
    }
    *out = new wbr_vorticity{std::make_shared<const Vorticity>(std::move(pieces), r)};
  });
}

void wbr_vorticity_destroy(wbr_vorticity* v) { delete v; }

wbr_status wbr_vorticity_gamma(const wbr_vorticity* v, double s, double* out) {
  if (v == nullptr || out == nullptr) return invalid("null argument");
  return guard([&] { *out = v->v->gamma(s); });
}

wbr_status wbr_vorticity_big_gamma(const wbr_vorticity* v, double p, double* out) {
  if (v == nullptr || out == nullptr) return invalid("null argument");
  return guard([&] { *out = v->v->big_gamma(p); });
}

wbr_status wbr_check_admissible(const wbr_vorticity* v, double g, wbr_admissibility* out) {
  if (v == nullptr || out == nullptr) return invalid("null argument");
  return guard([&] {
    const auto r = check_admissible(*v->v, g);
    out->gamma_inf = v->v->gamma_inf();
    out->gamma_infinity = v->v->gamma_infinity();
    out->margin = r.margin;
    out->gamma_inf_ok = r.gamma_inf_ok ? 1 : 0;
    out->decay_ok = r.decay_ok ? 1 : 0;
    out->pass = r.pass() ? 1 : 0;
  });
}

wbr_status wbr_laminar_height(const wbr_vorticity* v, double lambda, double p, double g, double* out) {
  if (v == nullptr || out == nullptr) return invalid("null argument");
  return guard([&] { *out = laminar_height(*v->v, lambda, p, g); });
}

wbr_status wbr_wave_speed(const wbr_vorticity* v, double lambda, double* out) {
  if (v == nullptr || out == nullptr) return invalid("null argument");
  return guard([&] { *out = wave_speed(lambda, v->v->gamma_infinity()); });
}

void wbr_grid_defaults(wbr_grid_params* out) {
  if (out == nullptr) return;
  out->nq = 32;
  out->np_upper = 24;
  out->np_lower = 128;
  out->p_max = 8.0 * std::numbers::pi;
}

wbr_status wbr_problem_create(const wbr_vorticity* v, double g, double delta, const wbr_grid_params* grid,
                              wbr_problem** out) {
  if (v == nullptr || grid == nullptr || out == nullptr) return invalid("null argument");
  *out = nullptr;
  return guard([&] {
    auto pr = std::make_unique<wbr_problem>();
    pr->v = v->v;
    pr->g = g;
    pr->op = std::make_unique<TransmissionOperator>(
        *pr->v, build_grid(*pr->v, grid->nq, grid->np_upper, grid->np_lower, grid->p_max), g, delta);
    *out = pr.release();
  });
}

void wbr_problem_destroy(wbr_problem* pr) { delete pr; }

size_t wbr_problem_np(const wbr_problem* pr) { return pr == nullptr ? 0 : pr->op->grid().np(); }

wbr_status wbr_problem_nodes(const wbr_problem* pr, double* p, size_t n) {
  if (pr == nullptr || p == nullptr) return invalid("null argument");
  const auto& nodes = pr->op->grid().p.nodes;
  if (n < nodes.size()) {
    last_error = "buffer too small";
    return WBR_ERR_BUFFER_TOO_SMALL;
  }
  std::copy(nodes.begin(), nodes.end(), p);
  last_error.clear();
  return WBR_OK;
}

wbr_status wbr_laminar_profile(const wbr_problem* pr, double lambda, double* h, double* hp, size_t n,
                               double* ode_residual, double* surface_residual) {
  if (pr == nullptr || h == nullptr || hp == nullptr) return invalid("null argument");
  if (n < pr->op->grid().np()) {
    last_error = "buffer too small";
    return WBR_ERR_BUFFER_TOO_SMALL;
  }
  return guard([&] {
    const auto flow = make_laminar(*pr->v, lambda, pr->g, pr->op->grid().p);
    std::copy(flow.h.begin(), flow.h.end(), h);
    std::copy(flow.hp.begin(), flow.hp.end(), hp);
    const auto r = verify_laminar(*pr->v, flow);
    if (ode_residual != nullptr) *ode_residual = r.ode;
    if (surface_residual != nullptr) *surface_residual = r.surface;
  });
}

wbr_status wbr_laminar_residual(const wbr_problem* pr, double lambda, double* out) {
  if (pr == nullptr || out == nullptr) return invalid("null argument");
  return guard([&] {
    const WaveState zero{lambda, 0.0, std::vector<double>(pr->op->grid().field_size(), 0.0)};
    double m = 0.0;
    for (double r : pr->op->residual(zero)) m = std::max(m, std::abs(r));
    *out = m;
  });
}

wbr_status wbr_dispersion_mu(const wbr_problem* pr, double lambda, double epsilon, int mode_k, double* out) {
  if (pr == nullptr || out == nullptr) return invalid("null argument");
  return guard([&] {
    *out = principal_eigenpair(assemble_pencil(*pr->v, lambda, epsilon, pr->op->grid().p, pr->g, mode_k)).mu;
  });
}

wbr_status wbr_find_bifurcation(const wbr_problem* pr, double epsilon, int mode_k, const double* bracket,
                                wbr_bifurcation* out) {
  if (pr == nullptr || out == nullptr) return invalid("null argument");
  return guard([&] {
    const auto pt = find_bifurcation(*pr->v, epsilon, pr->g, pr->op->grid().p, mode_k, bracket_of(bracket));
    const auto tr = transversality(pt, *pr->v, pr->g);
    out->lambda = pt.lambda;
    out->mu = pt.mu;
    out->mu_derivative = mu_derivative(pt, *pr->v, pr->g);
    out->transversality_lhs = tr.lhs;
    out->transversality_rhs = tr.rhs;
  });
}

wbr_status wbr_homotopy(const wbr_problem* pr, const double* schedule, size_t n, int mode_k, double* lambdas,
                        int* ok, double* order) {
  if (pr == nullptr || (n > 0 && (schedule == nullptr || lambdas == nullptr || ok == nullptr))) {
    return invalid("null argument");
  }
  return guard([&] {
    const auto tab =
        epsilon_homotopy(*pr->v, pr->g, pr->op->grid().p, std::vector<double>(schedule, schedule + n), mode_k);
    for (size_t k = 0; k < n; ++k) {
      ok[k] = tab.rows[k].ok ? 1 : 0;
      lambdas[k] = tab.rows[k].ok ? tab.rows[k].lambda : std::numeric_limits<double>::quiet_NaN();
    }
    if (order != nullptr) *order = tab.order;
  });
}

void wbr_continuation_defaults(wbr_continuation* out) {
  if (out == nullptr) return;
  const ContinuationConfig d;
  out->s0 = d.s0;
  out->ds = d.ds;
  out->ds_min = d.ds_min;
  out->ds_max = d.ds_max;
  out->newton_tol = d.newton_tol;
  out->max_newton = d.max_newton;
  out->max_steps = d.max_steps;
  out->lambda_max = d.lambda_max;
  out->hp_max = d.hp_max;
  out->epsilon = d.epsilon;
  out->mode_k = 1;
}

wbr_status wbr_run_branch(const wbr_problem* pr, const wbr_continuation* cfg, const double* bracket,
                          wbr_branch** out) {
  if (pr == nullptr || cfg == nullptr || out == nullptr) return invalid("null argument");
  *out = nullptr;
  return guard([&] {
    const auto c = config_of(*cfg);
    const auto pt = find_bifurcation(*pr->v, c.epsilon, pr->g, pr->op->grid().p, cfg->mode_k, bracket_of(bracket));
    *out = new wbr_branch{run_branch(*pr->op, pt, c)};
  });
}

void wbr_branch_destroy(wbr_branch* br) { delete br; }

size_t wbr_branch_size(const wbr_branch* br) { return br == nullptr ? 0 : br->b.points.size(); }

double wbr_branch_lambda_bifurcation(const wbr_branch* br) {
  return br == nullptr ? std::numeric_limits<double>::quiet_NaN() : br->b.lambda_bifurcation;
}

wbr_termination wbr_branch_termination(const wbr_branch* br) {
  return br == nullptr ? WBR_TERM_MAX_STEPS : static_cast<wbr_termination>(br->b.reason);
}

const char* wbr_branch_detail(const wbr_branch* br) { return br == nullptr ? "" : br->b.detail.c_str(); }

wbr_status wbr_branch_point(const wbr_branch* br, size_t k, wbr_point* out) {
  if (br == nullptr || out == nullptr) return invalid("null argument");
  if (k >= br->b.points.size()) return invalid("point index out of range");
  const auto& p = br->b.points[k];
  *out = wbr_point{p.step,          p.s,        p.lambda,      p.c,          p.amplitude,   p.max_hp,
                   p.surface_residual, p.interface_residual, p.nodal_ok ? 1 : 0, p.tau_fit, p.mean_drift,
                   p.newton_iters};
  last_error.clear();
  return WBR_OK;
}

wbr_status wbr_branch_csv(const wbr_branch* br, char* buf, size_t cap, size_t* needed) {
  if (br == nullptr) return invalid("null argument");
  std::string s;
  const auto st = guard([&] { s = branch_csv(br->b); });
  if (st != WBR_OK) return st;
  if (needed != nullptr) *needed = s.size() + 1;
  if (buf == nullptr || cap < s.size() + 1) {
    last_error = "buffer too small";
    return WBR_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return WBR_OK;
}

wbr_status wbr_reconstruct(const wbr_problem* pr, const wbr_branch* br, size_t k, double p_atm, wbr_wave** out) {
  if (pr == nullptr || br == nullptr || out == nullptr) return invalid("null argument");
  *out = nullptr;
  if (k >= br->b.states.size()) return invalid("point index out of range");
  return guard([&] {
    const auto& st = br->b.states[k];
    if (st.w.size() != pr->op->grid().field_size()) {
      throw Error(ErrorKind::Precondition, "branch was computed on a different grid");
    }
    *out = new wbr_wave{reconstruct(*pr->op, st, p_atm), surface_conditions(*pr->op, st)};
  });
}

void wbr_wave_destroy(wbr_wave* wave) { delete wave; }

void wbr_wave_dims(const wbr_wave* wave, size_t* np, size_t* nx) {
  if (np != nullptr) *np = wave == nullptr ? 0 : wave->w.np;
  if (nx != nullptr) *nx = wave == nullptr ? 0 : wave->w.nx;
}

double wbr_wave_speed_of(const wbr_wave* wave) {
  return wave == nullptr ? std::numeric_limits<double>::quiet_NaN() : wave->w.c;
}

wbr_status wbr_wave_field(const wbr_wave* wave, wbr_field field, const double** data, size_t* n) {
  if (wave == nullptr || data == nullptr || n == nullptr) return invalid("null argument");
  const std::vector<double>* v = nullptr;
  switch (field) {
    case WBR_FIELD_X: v = &wave->w.x; break;
    case WBR_FIELD_Y: v = &wave->w.y; break;
    case WBR_FIELD_U: v = &wave->w.u; break;
    case WBR_FIELD_V: v = &wave->w.v; break;
    case WBR_FIELD_PRESSURE: v = &wave->w.pressure; break;
    case WBR_FIELD_PSI: v = &wave->w.psi; break;
    case WBR_FIELD_SURFACE_X: v = &wave->w.x_surface; break;
    case WBR_FIELD_SURFACE_ETA: v = &wave->w.eta; break;
  }
  if (v == nullptr) return invalid("unknown field");
  *data = v->data();
  *n = v->size();
  last_error.clear();
  return WBR_OK;
}

wbr_status wbr_wave_surface_conditions(const wbr_wave* wave, double* kinematic, double* dynamic) {
  if (wave == nullptr) return invalid("null argument");
  if (kinematic != nullptr) *kinematic = wave->sc.kinematic;
  if (dynamic != nullptr) *dynamic = wave->sc.dynamic;
  last_error.clear();
  return WBR_OK;
}

}  // extern "C"
