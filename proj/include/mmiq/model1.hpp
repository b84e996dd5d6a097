#pragma once

#include <span>
#include <vector>

#include "mmiq/chain.hpp"
#include "mmiq/ode.hpp"

namespace mmiq {

// Conditional mean vector m(t), m_i(t) = E M^(N)(t) 1{J(t)=i}, on a grid.
struct MeanTrajectory {
    std::vector<double> t_grid;
    std::vector<Vector> m;      // one length-d vector per grid point
    std::vector<double> total;  // E M^(N)(t) = sum_i m_i(t)
};

// Solves m'(t) = pi^T N Lambda - m(t) (M - N^alpha Q) from m(0) = 0.
MeanTrajectory mean_trajectory(const QueueSpec& spec, const ScalingParams& scaling,
                               std::span<const double> t_grid, const OdeOptions& opt = {});

// Vectorized two-time moment surfaces at fixed lag u:
//   E_ij = E M(t) 1{J(t)=i, J(t+u)=j},  G_ij = E M(t+u) 1{...},
//   C_ij = E M(t) M(t+u) 1{...},        K_ij(u) = pi_i p_ij(u).
struct JointMomentState {
    double u = 0.0;
    std::vector<double> t_grid;
    std::vector<Vector> e, g, c;  // d^2 entries per grid point, column-stacked
    Vector k;                     // d^2
};

JointMomentState joint_moment_odes(const QueueSpec& spec, double u,
                                   std::span<const double> t_grid,
                                   const OdeOptions& opt = {});

// Cov(M(t), M(t+u)) = 1^T c(t,u) - (1^T e(t,u)) (1^T g(t,u)).
double covariance(const QueueSpec& spec, double t, double u, const OdeOptions& opt = {});

// 1^T of the stationary d^2-dimensional linear solve for e(infinity, u).
double stationary_mean(const QueueSpec& spec);

// lim_{t->inf} Cov(M(t), M(t+u)).
double stationary_covariance(const QueueSpec& spec, double u);

// Large-N refinement (N rho - N^{1-alpha} pi^T Lambda F M 1 / mu_inf)(1 - e^{-mu_inf t}).
double refined_mean(const QueueSpec& spec, const ScalingParams& scaling, double t);

namespace detail {

// One-time conditional moments: rho_i = E M(t) 1{J(t)=i}, sigma_i = E M(t)^2 1{J(t)=i}.
struct OneTimeMoments {
    std::vector<Vector> rho, sigma;  // per grid point
};
OneTimeMoments one_time_moments(const QueueSpec& spec, std::span<const double> t_grid,
                                const OdeOptions& opt);

// Propagation kernels over a lag u:
//   S(u) = exp((Q - M) u)        survival-and-endpoint kernel,
//   W(u) = int_0^u P(s) Lambda S(u-s) ds   new-arrival kernel (Van Loan block).
struct LagKernels {
    Matrix P, S, W;
};
LagKernels lag_kernels(const QueueSpec& spec, double u);

}  // namespace detail

}  // namespace mmiq
