#pragma once

#include "mmiq/chain.hpp"

namespace mmiq {

// rho^(II)(t) = sum_i pi_i (lambda_i/mu_i)(1 - e^{-mu_i t})
double mean_m2(const QueueSpec& spec, double t);

// Covariance kernels of the conditional-mean decomposition, reduced to single
// integrals over the transition function.
struct CovKernel {
    double t = 0.0, u = 0.0;
    Matrix K, L1, L2;
};

CovKernel cov_kernels(const QueueSpec& spec, double t, double u, double abs_tol = 1e-10);

Matrix script_K(const QueueSpec& spec, double t, double u);
Matrix script_L(const QueueSpec& spec, double t, double u);  // L1 + L2

// Law of total covariance: mixed-Poisson term + lambda^T (K + L) lambda.
// Negative lags are answered by symmetry: (t, u<0) -> (t+u, -u).
double covariance_m2(const QueueSpec& spec, double t, double u);

// Four-term t->infinity expression (D^(mu) + split integrals).
double stationary_covariance_m2(const QueueSpec& spec, double u);

// Direct two-term stationary variance with D^(mu).
double stationary_variance_m2(const QueueSpec& spec);

}  // namespace mmiq
