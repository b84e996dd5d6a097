#include "mmiq/model2.hpp"

#include <cmath>

#include "mmiq/quadrature.hpp"

namespace mmiq {

namespace {

// pi_i (p_ij(w) - pi_j) style deviations, shared by all kernel integrands.
struct KernelContext {
    const QueueSpec& spec;
    Vector pi;
    explicit KernelContext(const QueueSpec& s) : spec(s), pi(stationary_distribution(s.gen)) {}
    Matrix p(double w) const { return transition_matrix(spec.gen, w); }
};

}  // namespace

double mean_m2(const QueueSpec& spec, double t) {
    if (t < 0.0) throw Error("mean_m2: t must be nonnegative");
    const Vector pi = stationary_distribution(spec.gen);
    double acc = 0.0;
    for (int i = 0; i < spec.dim(); ++i)
        acc += pi(i) * spec.lambda(i) / spec.mu(i) * (1.0 - std::exp(-spec.mu(i) * t));
    return acc;
}

CovKernel cov_kernels(const QueueSpec& spec, double t, double u, double abs_tol) {
    if (t < 0.0 || u < 0.0) throw Error("cov_kernels: t and u must be nonnegative");
    const int d = spec.dim();
    const KernelContext ctx(spec);
    const Vector& mu = spec.mu;
    const Vector& pi = ctx.pi;

    CovKernel out;
    out.t = t;
    out.u = u;
    out.K = Matrix::Zero(d, d);
    out.L1 = Matrix::Zero(d, d);
    out.L2 = Matrix::Zero(d, d);
    if (d == 1) return out;  // p(w) == pi, all integrands vanish

    // K: (pi_i/(mu_i+mu_j)) int_0^t (e^{-mu_i w - mu_j u} - e^{-mu_i t - mu_j (t+u-w)})
    //                               (p_ij(w) - pi_j) dw
    // (the paper's e^{-mu_j(t+u)} prefactor folded into the exponents so the
    //  integrand stays O(1) for large t)
    if (t > 0.0) {
        auto k_int = [&](double w) -> Matrix {
            const Matrix p = ctx.p(w);
            Matrix val(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    val(i, j) = (std::exp(-mu(i) * w - mu(j) * u) -
                                 std::exp(-mu(i) * t - mu(j) * (t + u - w))) *
                                (p(i, j) - pi(j));
            return val;
        };
        const Matrix ik = integrate_matrix(k_int, 0.0, t, abs_tol);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out.K(i, j) = pi(i) / (mu(i) + mu(j)) * ik(i, j);
    }

    // L1: (pi_j/(mu_i+mu_j)) (e^{-mu_j u} - e^{-mu_i t - mu_j (t+u)})
    //                        int_0^u e^{mu_i w} (p_ji(w) - pi_i) dw
    if (u > 0.0 && t > 0.0) {
        auto l1_int = [&](double w) -> Matrix {
            const Matrix p = ctx.p(w);
            Matrix val(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    val(i, j) = std::exp(mu(i) * w) * (p(j, i) - pi(i));
            return val;
        };
        const Matrix il1 = integrate_matrix(l1_int, 0.0, u, abs_tol);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out.L1(i, j) = pi(j) / (mu(i) + mu(j)) *
                               (std::exp(-mu(j) * u) - std::exp(-mu(i) * t - mu(j) * (t + u))) *
                               il1(i, j);
    }

    // L2: (pi_j/(mu_i+mu_j)) int_u^{t+u} (e^{mu_i u - mu_j w} - e^{mu_i (w-t) - mu_j (t+u)})
    //                                    (p_ji(w) - pi_i) dw
    if (t > 0.0) {
        auto l2_int = [&](double w) -> Matrix {
            const Matrix p = ctx.p(w);
            Matrix val(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    val(i, j) = (std::exp(mu(i) * u - mu(j) * w) -
                                 std::exp(mu(i) * (w - t) - mu(j) * (t + u))) *
                                (p(j, i) - pi(i));
            return val;
        };
        const Matrix il2 = integrate_matrix(l2_int, u, t + u, abs_tol);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out.L2(i, j) = pi(j) / (mu(i) + mu(j)) * il2(i, j);
    }
    return out;
}

Matrix script_K(const QueueSpec& spec, double t, double u) { return cov_kernels(spec, t, u).K; }

Matrix script_L(const QueueSpec& spec, double t, double u) {
    const CovKernel k = cov_kernels(spec, t, u);
    return k.L1 + k.L2;
}

double covariance_m2(const QueueSpec& spec, double t, double u) {
    if (u < 0.0) {
        // Cov(M(t), M(t+u)) = Cov(M(t+u), M(t)) with roles swapped
        if (t + u < 0.0) throw Error("covariance_m2: t+u must be nonnegative");
        return covariance_m2(spec, t + u, -u);
    }
    if (t < 0.0) throw Error("covariance_m2: t must be nonnegative");
    const Vector pi = stationary_distribution(spec.gen);
    double mixed = 0.0;
    for (int i = 0; i < spec.dim(); ++i)
        mixed += pi(i) * spec.lambda(i) / spec.mu(i) * (1.0 - std::exp(-spec.mu(i) * t)) *
                 std::exp(-spec.mu(i) * u);
    const CovKernel k = cov_kernels(spec, t, u);
    return mixed + spec.lambda.dot((k.K + k.L1 + k.L2) * spec.lambda);
}

double stationary_covariance_m2(const QueueSpec& spec, double u) {
    if (u < 0.0) throw Error("stationary_covariance_m2: lag must be nonnegative");
    const int d = spec.dim();
    const Vector pi = stationary_distribution(spec.gen);
    const Vector& mu = spec.mu;
    const Vector& lam = spec.lambda;

    double acc = 0.0;
    for (int i = 0; i < d; ++i) acc += pi(i) * lam(i) / mu(i) * std::exp(-mu(i) * u);

    if (d == 1) return acc;

    const Matrix dev_mu = weighted_deviation_matrix(spec.gen, mu);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            acc += pi(i) * lam(i) * lam(j) / (mu(i) + mu(j)) * std::exp(-mu(j) * u) * dev_mu(i, j);

    auto devp = [&](double w) -> Matrix {
        const Matrix p = transition_matrix(spec.gen, w);
        Matrix val(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) val(i, j) = p(j, i) - pi(i);
        return val;
    };

    if (u > 0.0) {
        auto f3 = [&](double w) -> Matrix {
            Matrix val = devp(w);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) val(i, j) *= std::exp(mu(i) * w - mu(j) * u);
            return val;
        };
        const Matrix i3 = integrate_matrix(f3, 0.0, u, 1e-10);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                acc += pi(j) * lam(i) * lam(j) / (mu(i) + mu(j)) * i3(i, j);
    }

    const double gap = spectral_gap(spec.gen);
    const double upper = u + (std::isinf(gap) ? 0.0 : 40.0 / gap);
    if (upper > u) {
        auto f4 = [&](double w) -> Matrix {
            Matrix val = devp(w);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) val(i, j) *= std::exp(mu(i) * u - mu(j) * w);
            return val;
        };
        const Matrix i4 = integrate_matrix(f4, u, upper, 1e-10);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                acc += pi(j) * lam(i) * lam(j) / (mu(i) + mu(j)) * i4(i, j);
    }
    return acc;
}

double stationary_variance_m2(const QueueSpec& spec) {
    const int d = spec.dim();
    const Vector pi = stationary_distribution(spec.gen);
    double acc = 0.0;
    for (int i = 0; i < d; ++i) acc += pi(i) * spec.lambda(i) / spec.mu(i);
    if (d == 1) return acc;
    const Matrix dev_mu = weighted_deviation_matrix(spec.gen, spec.mu);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            acc += 2.0 * pi(i) * spec.lambda(i) * spec.lambda(j) / (spec.mu(i) + spec.mu(j)) *
                   dev_mu(i, j);
    return acc;
}

}  // namespace mmiq
