/* Copyright 2026 The wavebranch Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef WAVEBRANCH_WAVEBRANCH_H
#define WAVEBRANCH_WAVEBRANCH_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(WAVEBRANCH_BUILDING)
#define WBR_API __declspec(dllexport)
#else
#define WBR_API __declspec(dllimport)
#endif
#else
#define WBR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wbr_status {
  WBR_OK = 0,
  WBR_ERR_DOMAIN = 1,
  WBR_ERR_ADMISSIBILITY = 2,
  WBR_ERR_SINGULAR_COEFFICIENT = 3,
  WBR_ERR_PARAMETER_RANGE = 4,
  WBR_ERR_CONFIG = 5,
  WBR_ERR_MARGIN = 6,
  WBR_ERR_SINGULAR_MATRIX = 7,
  WBR_ERR_NUMERICAL = 8,
  WBR_ERR_NO_BIFURCATION = 9,
  WBR_ERR_NEWTON = 10,
  WBR_ERR_DEGENERATE_FIT = 11,
  WBR_ERR_STAGNATION = 12,
  WBR_ERR_PRECONDITION = 13,
  WBR_ERR_INVALID_ARGUMENT = 14,
  WBR_ERR_BUFFER_TOO_SMALL = 15,
  WBR_ERR_INTERNAL = 16
} wbr_status;

typedef enum wbr_termination {
  WBR_TERM_SPEED_UNBOUNDED = 0,
  WBR_TERM_STAGNATION_APPROACH = 1,
  WBR_TERM_MARGIN_HIT = 2,
  WBR_TERM_NEWTON_FAILURE = 3,
  WBR_TERM_MAX_STEPS = 4,
  WBR_TERM_NODAL_PATTERN_LOST = 5
} wbr_termination;

typedef enum wbr_piece_kind {
  WBR_PIECE_POLYEXP = 0,  /* (c_0 + c_1 s + ...) exp(-rate s) */
  WBR_PIECE_RATIONAL = 1  /* amplitude (1 + s)^(-exponent) */
} wbr_piece_kind;

/* One piece of gamma on s in [s_lo, s_hi); s_hi may be INFINITY for the last. */
typedef struct wbr_segment {
  double s_lo;
  double s_hi;
  wbr_piece_kind kind;
  const double* coeffs;
  size_t n_coeffs;
  double rate;
  double amplitude;
  double exponent;
} wbr_segment;

typedef struct wbr_admissibility {
  double gamma_inf;
  double gamma_infinity;
  double margin;
  int gamma_inf_ok;
  int decay_ok;
  int pass;
} wbr_admissibility;

typedef struct wbr_grid_params {
  size_t nq;
  size_t np_upper;
  size_t np_lower;
  double p_max;
} wbr_grid_params;

typedef struct wbr_bifurcation {
  double lambda;
  double mu;
  double mu_derivative;
  double transversality_lhs;
  double transversality_rhs;
} wbr_bifurcation;

typedef struct wbr_continuation {
  double s0;
  double ds;
  double ds_min;
  double ds_max;
  double newton_tol;
  int max_newton;
  int max_steps;
  double lambda_max;
  double hp_max;
  double epsilon;
  int mode_k;
} wbr_continuation;

typedef struct wbr_point {
  int step;
  double s;
  double lambda;
  double c;
  double amplitude;
  double max_hp;
  double surface_residual;
  double interface_residual;
  int nodal_ok;
  double tau_fit;
  double mean_drift;
  int newton_iters;
} wbr_point;

typedef enum wbr_field {
  WBR_FIELD_X = 0,
  WBR_FIELD_Y = 1,
  WBR_FIELD_U = 2,
  WBR_FIELD_V = 3,
  WBR_FIELD_PRESSURE = 4,
  WBR_FIELD_PSI = 5,
  WBR_FIELD_SURFACE_X = 6,
  WBR_FIELD_SURFACE_ETA = 7
} wbr_field;

typedef struct wbr_vorticity wbr_vorticity;
typedef struct wbr_problem wbr_problem;
typedef struct wbr_branch wbr_branch;
typedef struct wbr_wave wbr_wave;

WBR_API const char* wbr_version(void);
WBR_API const char* wbr_status_string(wbr_status status);
/* Message of the last failing call on this thread; empty after success. */
WBR_API const char* wbr_last_error(void);
WBR_API const char* wbr_termination_string(wbr_termination reason);

WBR_API wbr_status wbr_vorticity_create(const wbr_segment* segments, size_t n_segments, double decay_exponent,
                                        wbr_vorticity** out);
WBR_API void wbr_vorticity_destroy(wbr_vorticity* v);
WBR_API wbr_status wbr_vorticity_gamma(const wbr_vorticity* v, double s, double* out);
/* Gamma(p) for p <= 0. */
WBR_API wbr_status wbr_vorticity_big_gamma(const wbr_vorticity* v, double p, double* out);
WBR_API wbr_status wbr_check_admissible(const wbr_vorticity* v, double g, wbr_admissibility* out);
WBR_API wbr_status wbr_laminar_height(const wbr_vorticity* v, double lambda, double p, double g, double* out);
WBR_API wbr_status wbr_wave_speed(const wbr_vorticity* v, double lambda, double* out);

WBR_API void wbr_grid_defaults(wbr_grid_params* out);
/* Keeps its own reference to the vorticity; v may be destroyed afterwards. */
WBR_API wbr_status wbr_problem_create(const wbr_vorticity* v, double g, double delta, const wbr_grid_params* grid,
                                      wbr_problem** out);
WBR_API void wbr_problem_destroy(wbr_problem* pr);
WBR_API size_t wbr_problem_np(const wbr_problem* pr);
/* p-nodes, ascending, n = wbr_problem_np. */
WBR_API wbr_status wbr_problem_nodes(const wbr_problem* pr, double* p, size_t n);

/* H and H_p on the p-nodes, with the ODE and surface residuals. */
WBR_API wbr_status wbr_laminar_profile(const wbr_problem* pr, double lambda, double* h, double* hp, size_t n,
                                       double* ode_residual, double* surface_residual);
/* Infinity norm of the discrete residual at w = 0. */
WBR_API wbr_status wbr_laminar_residual(const wbr_problem* pr, double lambda, double* out);

WBR_API wbr_status wbr_dispersion_mu(const wbr_problem* pr, double lambda, double epsilon, int mode_k, double* out);
/* bracket may be NULL or point to {lo, hi}. */
WBR_API wbr_status wbr_find_bifurcation(const wbr_problem* pr, double epsilon, int mode_k, const double* bracket,
                                        wbr_bifurcation* out);
/* lambdas[i] receives NaN and ok[i] = 0 where no root was found. */
WBR_API wbr_status wbr_homotopy(const wbr_problem* pr, const double* schedule, size_t n, int mode_k, double* lambdas,
                                int* ok, double* order);

WBR_API void wbr_continuation_defaults(wbr_continuation* out);
WBR_API wbr_status wbr_run_branch(const wbr_problem* pr, const wbr_continuation* cfg, const double* bracket,
                                  wbr_branch** out);
WBR_API void wbr_branch_destroy(wbr_branch* br);
WBR_API size_t wbr_branch_size(const wbr_branch* br);
WBR_API double wbr_branch_lambda_bifurcation(const wbr_branch* br);
WBR_API wbr_termination wbr_branch_termination(const wbr_branch* br);
WBR_API const char* wbr_branch_detail(const wbr_branch* br);
WBR_API wbr_status wbr_branch_point(const wbr_branch* br, size_t k, wbr_point* out);
/* Writes at most cap bytes including the terminator; *needed gets the full size. */
WBR_API wbr_status wbr_branch_csv(const wbr_branch* br, char* buf, size_t cap, size_t* needed);

WBR_API wbr_status wbr_reconstruct(const wbr_problem* pr, const wbr_branch* br, size_t k, double p_atm,
                                   wbr_wave** out);
WBR_API void wbr_wave_destroy(wbr_wave* wave);
WBR_API void wbr_wave_dims(const wbr_wave* wave, size_t* np, size_t* nx);
WBR_API double wbr_wave_speed_of(const wbr_wave* wave);
/* Borrowed pointer, valid until the wave is destroyed. */
WBR_API wbr_status wbr_wave_field(const wbr_wave* wave, wbr_field field, const double** data, size_t* n);
WBR_API wbr_status wbr_wave_surface_conditions(const wbr_wave* wave, double* kinematic, double* dynamic);

#ifdef __cplusplus
}
#endif

#endif
