#pragma once

#include "mmiq/chain.hpp"

namespace mmiq {

// rho^(I) = lambda_inf / mu_inf and its transient profile.
double rho1(const QueueSpec& spec);
double rho1_t(const QueueSpec& spec, double t);

// OU variance of the slow-switching branch:
// 2 int_0^t e^{-2 mu_inf (t-s)} pi^T (Lam - M rho^(I)(s)) D (Lam - M rho^(I)(s)) 1 ds.
double varsigma1(const QueueSpec& spec, double t);

// Limit covariance, Model I: e^{-mu_inf u} (varsigma1(t) 1{a<=1} + rho1_t 1{a>=1}).
double v1(const QueueSpec& spec, double alpha, double t, double u);

// Per-type Model II pieces.
double rho2_i(const QueueSpec& spec, int i, double t);
double varsigma2_i(const QueueSpec& spec, int i, double t);

// Limit covariance, Model II: sum_i e^{-mu_i u} (varsigma2_i 1{a<=1} + rho2_i 1{a>=1}).
double v2(const QueueSpec& spec, double alpha, double t, double u);

// Quadratic-variation clock of the modulation martingale and its rate
// (distinct from varsigma1, which is the damped OU response).
double variance_clock_rate(const QueueSpec& spec, double t);  // V'(t)
double variance_clock(const QueueSpec& spec, double t);       // V(t)

// Poisson-noise clock W(t) = lambda_inf t + int_0^t mu_inf rho^(I)(1-e^{-mu_inf s}) ds.
double diffusion_W(const QueueSpec& spec, double t);
double diffusion_W_rate(const QueueSpec& spec, double t);

// Per-type clocks for Model II: w_i(t) and W_i(t) = w_i'(t).
double poisson_clock_type(const QueueSpec& spec, int i, double t);
double poisson_clock_rate_type(const QueueSpec& spec, int i, double t);

// V = Lambda (diag(pi) D + D^T diag(pi)) Lambda; throws NotPsd when an
// eigenvalue drops below -1e-8.
Matrix diffusion_V_matrix(const QueueSpec& spec);

// Factor L with L L^T = V after clamping eigenvalues below 1e-12 to zero.
Matrix diffusion_V_factor(const QueueSpec& spec);

enum class OuBranch { slow, fast };  // slow: alpha <= 1, fast: alpha >= 1

// Limiting per-type OU covariance Cov(M~_i(t), M~_j(t)) on the chosen branch.
double ou_cov_m2(const QueueSpec& spec, int i, int j, double t, OuBranch branch);

}  // namespace mmiq
