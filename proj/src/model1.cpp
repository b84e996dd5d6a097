#include "mmiq/model1.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace mmiq {

namespace {

void check_grid(std::span<const double> grid) {
    if (grid.empty() || grid.front() != 0.0)
        throw Error("time grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw Error("time grid must be strictly increasing");
}

}  // namespace

namespace detail {

OneTimeMoments one_time_moments(const QueueSpec& spec, std::span<const double> t_grid,
                                const OdeOptions& opt) {
    const int d = spec.dim();
    const Vector pi = stationary_distribution(spec.gen);
    const Vector forcing = pi.cwiseProduct(spec.lambda);
    const Matrix qt = spec.gen.rates().transpose();
    const Vector two_lam_mu = 2.0 * spec.lambda + spec.mu;

    OneTimeMoments out;
    out.rho.resize(t_grid.size());
    out.sigma.resize(t_grid.size());

    // y = [rho; sigma]:
    //   rho'   = pi.lambda - mu.rho + Q^T rho
    //   sigma' = pi.lambda + (2 lambda + mu).rho - 2 mu.sigma + Q^T sigma
    auto rhs = [&](double, const Vector& y, Vector& dy) {
        const auto rho = y.head(d);
        const auto sig = y.tail(d);
        dy.head(d) = forcing - spec.mu.cwiseProduct(rho) + qt * rho;
        dy.tail(d) =
            forcing + two_lam_mu.cwiseProduct(rho) - 2.0 * spec.mu.cwiseProduct(sig) + qt * sig;
    };
    integrate_dopri5(
        rhs, Vector::Zero(2 * d), t_grid,
        [&](std::size_t idx, double, const Vector& y) {
            out.rho[idx] = y.head(d);
            out.sigma[idx] = y.tail(d);
        },
        opt);
    return out;
}

LagKernels lag_kernels(const QueueSpec& spec, double u) {
    const int d = spec.dim();
    const Matrix& q = spec.gen.rates();
    LagKernels k;
    k.P = (q * u).exp();
    Matrix qm = q;
    qm.diagonal() -= spec.mu;
    k.S = (qm * u).exp();
    Matrix block = Matrix::Zero(2 * d, 2 * d);
    block.topLeftCorner(d, d) = q;
    block.topRightCorner(d, d) = Matrix(spec.lambda.asDiagonal());
    block.bottomRightCorner(d, d) = qm;
    k.W = (block * u).exp().topRightCorner(d, d);
    return k;
}

}  // namespace detail

MeanTrajectory mean_trajectory(const QueueSpec& spec, const ScalingParams& scaling,
                               std::span<const double> t_grid, const OdeOptions& opt) {
    check_grid(t_grid);
    const QueueSpec sc = spec.scaled(scaling);
    const int d = sc.dim();
    const Vector pi = stationary_distribution(sc.gen);
    const Vector forcing = pi.cwiseProduct(sc.lambda);
    const Matrix qt = sc.gen.rates().transpose();

    MeanTrajectory out;
    out.t_grid.assign(t_grid.begin(), t_grid.end());
    out.m.resize(t_grid.size());
    out.total.resize(t_grid.size());

    auto rhs = [&](double, const Vector& y, Vector& dy) {
        dy = forcing - sc.mu.cwiseProduct(y) + qt * y;
    };
    integrate_dopri5(
        rhs, Vector::Zero(d), t_grid,
        [&](std::size_t idx, double, const Vector& y) {
            out.m[idx] = y;
            out.total[idx] = y.sum();
        },
        opt);
    return out;
}

JointMomentState joint_moment_odes(const QueueSpec& spec, double u,
                                   std::span<const double> t_grid, const OdeOptions& opt) {
    if (u < 0.0) throw Error("joint_moment_odes: lag must be nonnegative");
    check_grid(t_grid);
    const Vector pi = stationary_distribution(spec.gen);
    const auto kern = detail::lag_kernels(spec, u);
    const auto moments = detail::one_time_moments(spec, t_grid, opt);

    JointMomentState out;
    out.u = u;
    out.t_grid.assign(t_grid.begin(), t_grid.end());
    out.k = vec(Matrix(pi.asDiagonal() * kern.P));
    out.e.resize(t_grid.size());
    out.g.resize(t_grid.size());
    out.c.resize(t_grid.size());
    const Matrix pi_w = pi.asDiagonal() * kern.W;
    for (std::size_t idx = 0; idx < t_grid.size(); ++idx) {
        const auto& rho = moments.rho[idx];
        const auto& sig = moments.sigma[idx];
        out.e[idx] = vec(Matrix(rho.asDiagonal() * kern.P));
        out.g[idx] = vec(Matrix(rho.asDiagonal() * kern.S + pi_w));
        out.c[idx] = vec(Matrix(sig.asDiagonal() * kern.S + rho.asDiagonal() * kern.W));
    }
    return out;
}

double covariance(const QueueSpec& spec, double t, double u, const OdeOptions& opt) {
    if (t < 0.0 || u < 0.0) throw Error("covariance: t and u must be nonnegative");
    if (t == 0.0) return 0.0;  // M(0) = 0 is degenerate
    const double grid[2] = {0.0, t};
    const JointMomentState st = joint_moment_odes(spec, u, grid, opt);
    return st.c[1].sum() - st.e[1].sum() * st.g[1].sum();
}

double stationary_mean(const QueueSpec& spec) {
    const int d = spec.dim();
    const Vector pi = stationary_distribution(spec.gen);
    const Matrix qt = spec.gen.rates().transpose();
    const Matrix qq = kron_sum(qt, qt);
    const Matrix id = Matrix::Identity(d, d);
    const Matrix lhs = kron(id, Matrix(spec.mu.asDiagonal())) - qq;
    const Vector k0 = vec(Matrix(pi.asDiagonal()));  // k(0)
    const Vector rhs = kron(id, Matrix(spec.lambda.asDiagonal())) * k0;
    Eigen::FullPivLU<Matrix> lu(lhs);
    if (!lu.isInvertible())
        throw SingularSystem("stationary_mean: (I@M - Q^T(+)Q^T) singular");
    return lu.solve(rhs).sum();
}

double stationary_covariance(const QueueSpec& spec, double u) {
    if (u < 0.0) throw Error("stationary_covariance: lag must be nonnegative");
    const Vector pi = stationary_distribution(spec.gen);
    const Vector forcing = pi.cwiseProduct(spec.lambda);
    const Matrix qt = spec.gen.rates().transpose();
    Matrix a1 = -qt;
    a1.diagonal() += spec.mu;
    Eigen::FullPivLU<Matrix> lu1(a1);
    if (!lu1.isInvertible()) throw SingularSystem("stationary_covariance: mean system singular");
    const Vector rho = lu1.solve(forcing);

    Matrix a2 = -qt;
    a2.diagonal() += 2.0 * spec.mu;
    Eigen::FullPivLU<Matrix> lu2(a2);
    if (!lu2.isInvertible())
        throw SingularSystem("stationary_covariance: second-moment system singular");
    const Vector sig =
        lu2.solve(forcing + (2.0 * spec.lambda + spec.mu).cwiseProduct(rho));

    const auto kern = detail::lag_kernels(spec, u);
    const double e_inf = rho.sum();
    const double c_sum = (kern.S.transpose() * sig + kern.W.transpose() * rho).sum();
    const double g_sum = (kern.S.transpose() * rho + kern.W.transpose() * pi).sum();
    return c_sum - e_inf * g_sum;
}

double refined_mean(const QueueSpec& spec, const ScalingParams& scaling, double t) {
    if (scaling.alpha <= 0.0) throw Error("refined_mean: alpha must be positive");
    const auto chain = ChainAnalysis::analyze(spec.gen);
    const double lam = lambda_inf(spec, chain.pi);
    const double mu = mu_inf(spec, chain.pi);
    const double correction =
        chain.pi.cwiseProduct(spec.lambda).dot(chain.F * spec.mu);  // pi^T Lambda F M 1
    const double n = scaling.n;
    return (n * lam / mu - std::pow(n, 1.0 - scaling.alpha) * correction / mu) *
           (1.0 - std::exp(-mu * t));
}

}  // namespace mmiq
