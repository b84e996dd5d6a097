#include "mmiq/chain.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <vector>

#include "mmiq/quadrature.hpp"

namespace mmiq {

namespace {

// Reachability sweep over the positive off-diagonal pattern.
// `transpose` flips edge direction; together the two sweeps decide strong
// connectivity through state 0.
bool reaches_all(const Matrix& q, bool transpose) {
    const int d = static_cast<int>(q.rows());
    std::vector<char> seen(d, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < d; ++j) {
            if (j == i || seen[j]) continue;
            const double rate = transpose ? q(j, i) : q(i, j);
            if (rate > 0.0) {
                seen[j] = 1;
                ++count;
                stack.push_back(j);
            }
        }
    }
    return count == d;
}

}  // namespace

Generator::Generator(Matrix rates) : rates_(std::move(rates)) {
    if (rates_.rows() != rates_.cols() || rates_.rows() < 1)
        throw DimensionMismatch("Generator: rate matrix must be square and nonempty");
    const int d = dim();
    for (int i = 0; i < d; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < d; ++j) {
            if (i != j && rates_(i, j) < 0.0)
                throw Error("Generator: off-diagonal rates must be nonnegative");
            row_sum += rates_(i, j);
        }
        if (std::abs(row_sum) > 1e-12)
            throw Error("Generator: row sums must vanish (1e-12 absolute)");
    }
    if (!reaches_all(rates_, false) || !reaches_all(rates_, true))
        throw Error("Generator: chain is not irreducible (positive pattern not strongly connected)");
}

Vector stationary_distribution(const Generator& gen) {
    const int d = gen.dim();
    Matrix a = gen.rates().transpose();
    a.row(0).setOnes();  // replace one balance equation by the normalization
    Vector b = Vector::Zero(d);
    b(0) = 1.0;
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible())
        throw SingularSystem("stationary_distribution: balance system is rank-deficient");
    Vector pi = lu.solve(b);
    if ((pi.array() <= 0.0).any())
        throw SingularSystem("stationary_distribution: solution is not strictly positive");
    return pi / pi.sum();
}

Matrix transition_matrix(const Generator& gen, double t) {
    if (t < 0.0) throw Error("transition_matrix: t must be nonnegative");
    return (gen.rates() * t).exp();
}

Matrix deviation_matrix(const Generator& gen) {
    const Vector pi = stationary_distribution(gen);
    const Matrix big_pi = Vector::Ones(gen.dim()) * pi.transpose();
    Eigen::FullPivLU<Matrix> lu(big_pi - gen.rates());
    if (!lu.isInvertible())
        throw SingularSystem("deviation_matrix: (Pi - Q) is numerically singular");
    const Matrix f = lu.solve(Matrix::Identity(gen.dim(), gen.dim()));
    return f - big_pi;
}

double spectral_gap(const Generator& gen) {
    const int d = gen.dim();
    if (d == 1) return std::numeric_limits<double>::infinity();
    Eigen::EigenSolver<Matrix> es(gen.rates(), /*computeEigenvectors=*/false);
    const double scale = std::max(1.0, gen.rates().cwiseAbs().maxCoeff());
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
        const auto ev = es.eigenvalues()(i);
        if (std::abs(ev) <= 1e-9 * scale) continue;  // the simple zero eigenvalue
        gap = std::min(gap, -ev.real());
    }
    if (!(gap > 0.0))
        throw SingularSystem("spectral_gap: no decaying mode found; chain not irreducible?");
    return gap;
}

Matrix weighted_deviation_matrix(const Generator& gen, const Vector& gamma) {
    const int d = gen.dim();
    if (gamma.size() != d)
        throw DimensionMismatch("weighted_deviation_matrix: gamma has wrong length");
    if ((gamma.array() < 0.0).any())
        throw Error("weighted_deviation_matrix: gamma must be nonnegative");

    const Vector pi = stationary_distribution(gen);
    const Matrix big_pi = Vector::Ones(d) * pi.transpose();
    const Matrix dev = deviation_matrix(gen);
    const double gap = spectral_gap(gen);
    const double horizon = std::isinf(gap) ? 0.0 : std::log(1e12) / gap;

    Matrix out = Matrix::Zero(d, d);
    if (horizon > 0.0) {
        auto integrand = [&](double t) -> Matrix {
            const Matrix diff = transition_matrix(gen, t) - big_pi;
            Matrix val(d, d);
            for (int i = 0; i < d; ++i)
                val.row(i) = std::exp(-gamma(i) * t) * diff.row(i);
            return val;
        };
        out = integrate_matrix(integrand, 0.0, horizon, 1e-11);
    }
    for (int i = 0; i < d; ++i)
        if (gamma(i) == 0.0) out.row(i) = dev.row(i);
    return out;
}

ChainAnalysis ChainAnalysis::analyze(const Generator& gen) {
    ChainAnalysis a;
    a.pi = stationary_distribution(gen);
    a.Pi = Vector::Ones(gen.dim()) * a.pi.transpose();
    a.D = deviation_matrix(gen);
    a.F = a.D + a.Pi;
    a.gap = spectral_gap(gen);
    return a;
}

QueueSpec::QueueSpec(Generator g, Vector lambda_in, Vector mu_in)
    : gen(std::move(g)), lambda(std::move(lambda_in)), mu(std::move(mu_in)) {
    if (lambda.size() != gen.dim() || mu.size() != gen.dim())
        throw DimensionMismatch("QueueSpec: rate vectors must match the chain dimension");
    if ((lambda.array() < 0.0).any())
        throw Error("QueueSpec: arrival rates must be nonnegative");
    if ((mu.array() <= 0.0).any())
        throw Error("QueueSpec: service rates must be strictly positive");
}

QueueSpec QueueSpec::scaled(const ScalingParams& s) const {
    const double speed = std::pow(s.n, s.alpha);
    return QueueSpec(Generator(speed * gen.rates()), s.n * lambda, mu);
}

}  // namespace mmiq
