#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "mmiq/errors.hpp"
#include "mmiq/kron.hpp"

namespace mmiq {

// Conservative generator matrix of an irreducible finite CTMC.
// Construction validates sign structure, zero row sums (1e-12 absolute) and
// strong connectivity of the positive off-diagonal pattern.
class Generator {
  public:
    explicit Generator(Matrix rates);

    int dim() const { return static_cast<int>(rates_.rows()); }
    const Matrix& rates() const { return rates_; }
    double exit_rate(int i) const { return -rates_(i, i); }

  private:
    Matrix rates_;
};

Vector stationary_distribution(const Generator& gen);

// P(t) = exp(Qt)
Matrix transition_matrix(const Generator& gen, double t);

// Group-inverse route: F = (Pi - Q)^{-1}, D = F - Pi.
Matrix deviation_matrix(const Generator& gen);

// Decay rate of P(t) -> Pi: |largest nonzero eigenvalue real part| of Q.
// +infinity for a single-state chain (P(t) is constant).
double spectral_gap(const Generator& gen);

// D^(gamma): entry (i,j) is int_0^inf e^{-gamma_i t} (p_ij(t) - pi_j) dt,
// by adaptive quadrature truncated where e^{-gap t} < 1e-12. Rows with
// gamma_i = 0 use the closed-form deviation matrix row.
Matrix weighted_deviation_matrix(const Generator& gen, const Vector& gamma);

// Derived chain objects, computed once and shared.
struct ChainAnalysis {
    Vector pi;
    Matrix Pi;  // 1 pi^T
    Matrix D;
    Matrix F;  // D + Pi
    double gap;

    static ChainAnalysis analyze(const Generator& gen);
};

struct ScalingParams {
    double n = 1.0;
    double alpha = 1.0;

    double beta() const { return std::max(1.0, 2.0 - alpha) / 2.0; }
    // N^{2 beta}, the variance growth factor
    double growth() const { return std::pow(n, 2.0 * beta()); }
};

// The modulated queue (Q, lambda, mu).
struct QueueSpec {
    Generator gen;
    Vector lambda;
    Vector mu;

    QueueSpec(Generator g, Vector lambda_in, Vector mu_in);

    int dim() const { return gen.dim(); }

    // (N lambda, N^alpha Q); mu is untouched.
    QueueSpec scaled(const ScalingParams& s) const;
};

inline double lambda_inf(const QueueSpec& spec, const Vector& pi) { return pi.dot(spec.lambda); }
inline double mu_inf(const QueueSpec& spec, const Vector& pi) { return pi.dot(spec.mu); }

}  // namespace mmiq
