#include "mmiq/asymptotics.hpp"

#include <cmath>

#include "mmiq/quadrature.hpp"

namespace mmiq {

namespace {

struct LimitContext {
    ChainAnalysis chain;
    double lam_inf, mu_inf;
    explicit LimitContext(const QueueSpec& spec)
        : chain(ChainAnalysis::analyze(spec.gen)),
          lam_inf(lambda_inf(spec, chain.pi)),
          mu_inf(::mmiq::mu_inf(spec, chain.pi)) {}
};

// pi^T (Lam - M r) D (Lam - M r) 1 for scalar r
double quad_form(const QueueSpec& spec, const LimitContext& ctx, double r) {
    const Vector x = spec.lambda - r * spec.mu;
    return ctx.chain.pi.cwiseProduct(x).dot(ctx.chain.D * x);
}

void check_state(const QueueSpec& spec, int i) {
    if (i < 0 || i >= spec.dim()) throw Error("state index out of range");
}

}  // namespace

double rho1(const QueueSpec& spec) {
    const Vector pi = stationary_distribution(spec.gen);
    return lambda_inf(spec, pi) / mu_inf(spec, pi);
}

double rho1_t(const QueueSpec& spec, double t) {
    const Vector pi = stationary_distribution(spec.gen);
    const double mu = mu_inf(spec, pi);
    return lambda_inf(spec, pi) / mu * (1.0 - std::exp(-mu * t));
}

double varsigma1(const QueueSpec& spec, double t) {
    if (t < 0.0) throw Error("varsigma1: t must be nonnegative");
    if (t == 0.0 || spec.dim() == 1) return 0.0;
    const LimitContext ctx(spec);
    const double rho = ctx.lam_inf / ctx.mu_inf;
    auto integrand = [&](double s) {
        const double r = rho * (1.0 - std::exp(-ctx.mu_inf * s));
        return 2.0 * std::exp(-2.0 * ctx.mu_inf * (t - s)) * quad_form(spec, ctx, r);
    };
    return integrate(integrand, 0.0, t, 1e-10);
}

double v1(const QueueSpec& spec, double alpha, double t, double u) {
    if (alpha <= 0.0) throw Error("v1: alpha must be positive");
    const LimitContext ctx(spec);
    double val = 0.0;
    if (alpha <= 1.0) val += varsigma1(spec, t);
    if (alpha >= 1.0) val += ctx.lam_inf / ctx.mu_inf * (1.0 - std::exp(-ctx.mu_inf * t));
    return std::exp(-ctx.mu_inf * u) * val;
}

double rho2_i(const QueueSpec& spec, int i, double t) {
    check_state(spec, i);
    const Vector pi = stationary_distribution(spec.gen);
    return pi(i) * spec.lambda(i) / spec.mu(i) * (1.0 - std::exp(-spec.mu(i) * t));
}

double varsigma2_i(const QueueSpec& spec, int i, double t) {
    check_state(spec, i);
    if (t < 0.0) throw Error("varsigma2_i: t must be nonnegative");
    const auto chain = ChainAnalysis::analyze(spec.gen);
    double acc = 0.0;
    for (int j = 0; j < spec.dim(); ++j) {
        const double msum = spec.mu(i) + spec.mu(j);
        acc += spec.lambda(i) * spec.lambda(j) / msum * (1.0 - std::exp(-msum * t)) *
               (chain.pi(j) * chain.D(j, i) + chain.pi(i) * chain.D(i, j));
    }
    return acc;
}

double v2(const QueueSpec& spec, double alpha, double t, double u) {
    if (alpha <= 0.0) throw Error("v2: alpha must be positive");
    const Vector pi = stationary_distribution(spec.gen);
    double acc = 0.0;
    for (int i = 0; i < spec.dim(); ++i) {
        double val = 0.0;
        if (alpha <= 1.0) val += varsigma2_i(spec, i, t);
        if (alpha >= 1.0)
            val += pi(i) * spec.lambda(i) / spec.mu(i) * (1.0 - std::exp(-spec.mu(i) * t));
        acc += std::exp(-spec.mu(i) * u) * val;
    }
    return acc;
}

double variance_clock_rate(const QueueSpec& spec, double t) {
    const LimitContext ctx(spec);
    const double r = ctx.lam_inf / ctx.mu_inf * (1.0 - std::exp(-ctx.mu_inf * t));
    return 2.0 * quad_form(spec, ctx, r);
}

double variance_clock(const QueueSpec& spec, double t) {
    if (t <= 0.0) return 0.0;
    const LimitContext ctx(spec);
    const double rho = ctx.lam_inf / ctx.mu_inf;
    auto integrand = [&](double s) {
        return 2.0 * quad_form(spec, ctx, rho * (1.0 - std::exp(-ctx.mu_inf * s)));
    };
    return integrate(integrand, 0.0, t, 1e-10);
}

double diffusion_W(const QueueSpec& spec, double t) {
    const Vector pi = stationary_distribution(spec.gen);
    const double lam = lambda_inf(spec, pi);
    const double mu = mu_inf(spec, pi);
    return lam * t + lam * (t - (1.0 - std::exp(-mu * t)) / mu);
}

double diffusion_W_rate(const QueueSpec& spec, double t) {
    const Vector pi = stationary_distribution(spec.gen);
    const double lam = lambda_inf(spec, pi);
    return 2.0 * lam - lam * std::exp(-mu_inf(spec, pi) * t);
}

double poisson_clock_type(const QueueSpec& spec, int i, double t) {
    check_state(spec, i);
    const Vector pi = stationary_distribution(spec.gen);
    const double lp = spec.lambda(i) * pi(i);
    return lp * t + lp * (t - (1.0 - std::exp(-spec.mu(i) * t)) / spec.mu(i));
}

double poisson_clock_rate_type(const QueueSpec& spec, int i, double t) {
    check_state(spec, i);
    const Vector pi = stationary_distribution(spec.gen);
    return 2.0 * spec.lambda(i) * pi(i) - spec.lambda(i) * pi(i) * std::exp(-spec.mu(i) * t);
}

Matrix diffusion_V_matrix(const QueueSpec& spec) {
    const auto chain = ChainAnalysis::analyze(spec.gen);
    const Matrix core =
        chain.pi.asDiagonal() * chain.D + chain.D.transpose() * chain.pi.asDiagonal();
    const Matrix v = spec.lambda.asDiagonal() * core * spec.lambda.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (v + v.transpose()));
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw NotPsd("diffusion_V_matrix: V has an eigenvalue below -1e-8");
    return v;
}

Matrix diffusion_V_factor(const QueueSpec& spec) {
    const Matrix v = diffusion_V_matrix(spec);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (v + v.transpose()));
    Vector ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) ev(i) = ev(i) < 1e-12 ? 0.0 : std::sqrt(ev(i));
    return es.eigenvectors() * ev.asDiagonal();
}

double ou_cov_m2(const QueueSpec& spec, int i, int j, double t, OuBranch branch) {
    check_state(spec, i);
    check_state(spec, j);
    if (branch == OuBranch::fast) return i == j ? rho2_i(spec, i, t) : 0.0;
    const auto chain = ChainAnalysis::analyze(spec.gen);
    const double msum = spec.mu(i) + spec.mu(j);
    return spec.lambda(i) * spec.lambda(j) / msum * (1.0 - std::exp(-msum * t)) *
           (chain.pi(i) * chain.D(i, j) + chain.pi(j) * chain.D(j, i));
}

}  // namespace mmiq
