#include <doctest.h>

#include <cmath>
#include <random>

#include "mmiq/asymptotics.hpp"
#include "oracles.hpp"

using namespace mmiq;

TEST_SUITE_BEGIN("asymptotics");

TEST_CASE("varsigma1: degenerate cases and the Richardson oracle") {
    const QueueSpec mm = oracles::mm_inf_spec();
    CHECK(varsigma1(mm, 2.0) == 0.0);  // D = 0
    const QueueSpec bench = oracles::bench_spec();
    CHECK(varsigma1(bench, 0.0) == 0.0);

    const auto chain = ChainAnalysis::analyze(bench.gen);
    const double rho = lambda_inf(bench, chain.pi) / mu_inf(bench, chain.pi);
    const double mu = mu_inf(bench, chain.pi);
    auto integrand = [&](double s) {
        const Vector x = bench.lambda - rho * (1.0 - std::exp(-mu * s)) * bench.mu;
        return 2.0 * std::exp(-2.0 * mu * (2.0 - s)) * chain.pi.cwiseProduct(x).dot(chain.D * x);
    };
    const double oracle = oracles::trapezoid_richardson(integrand, 0.0, 2.0, 1e-10);
    CHECK(varsigma1(bench, 2.0) == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(varsigma1(bench, 2.0) == doctest::Approx(6.044151624706254).epsilon(1e-9));
    // stationary level: pi^T(Lam - M rho)D(Lam - M rho)1 / mu_inf = 20/3 for this chain
    CHECK(varsigma1(bench, 40.0) == doctest::Approx(20.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("v1 branch selection and the alpha = 1 overlap") {
    const QueueSpec bench = oracles::bench_spec();
    const double t = 2.0, u = 0.5;
    const double slow = v1(bench, 0.5, t, u);
    const double fast = v1(bench, 2.0, t, u);
    CHECK(v1(bench, 1.0, t, u) == doctest::Approx(slow + fast).epsilon(1e-12));
    CHECK(slow == doctest::Approx(2.8550550672064965).epsilon(1e-9));
    CHECK(fast == doctest::Approx(4.4884880688500560).epsilon(1e-9));

    const QueueSpec mm = oracles::mm_inf_spec(3.0, 2.0);
    CHECK(v1(mm, 2.0, 1.0, 0.5) ==
          doctest::Approx(std::exp(-1.0) * 1.5 * (1.0 - std::exp(-2.0))).epsilon(1e-12));
    CHECK(v1(mm, 0.5, 1.0, 0.5) == 0.0);
}

TEST_CASE("continuity of the branch split near alpha = 1") {
    const QueueSpec bench = oracles::bench_spec();
    const double below = v1(bench, std::nextafter(1.0, 0.0), 2.0, 0.5);
    const double above = v1(bench, std::nextafter(1.0, 2.0), 2.0, 0.5);
    CHECK(v1(bench, 1.0, 2.0, 0.5) == doctest::Approx(below + above).epsilon(1e-9));
}

TEST_CASE("varsigma2_i closed form equals its defining OU integral") {
    const QueueSpec bench = oracles::bench_spec();
    CHECK(varsigma2_i(bench, 0, 0.0) == 0.0);
    CHECK(varsigma2_i(oracles::mm_inf_spec(), 0, 2.0) == 0.0);
    CHECK(varsigma2_i(bench, 0, 2.0) == doctest::Approx(6.49177278503489).epsilon(1e-9));

    const auto chain = ChainAnalysis::analyze(bench.gen);
    for (int i = 0; i < 2; ++i) {
        double via_integral = 0.0;
        for (int j = 0; j < 2; ++j) {
            const double msum = bench.mu(i) + bench.mu(j);
            auto f = [&](double s) { return std::exp(msum * s); };
            via_integral += std::exp(-msum * 2.0) *
                            oracles::trapezoid_richardson(f, 0.0, 2.0, 1e-12) * bench.lambda(i) *
                            bench.lambda(j) *
                            (chain.pi(i) * chain.D(i, j) + chain.pi(j) * chain.D(j, i));
        }
        CHECK(varsigma2_i(bench, i, 2.0) == doctest::Approx(via_integral).epsilon(1e-10));
    }
}

TEST_CASE("v2 term-by-term assembly and frozen values") {
    const QueueSpec bench = oracles::bench_spec();
    const Vector pi = stationary_distribution(bench.gen);
    double manual = 0.0;
    for (int i = 0; i < 2; ++i)
        manual += std::exp(-bench.mu(i) * 0.5) * varsigma2_i(bench, i, 2.0);
    CHECK(v2(bench, 0.5, 2.0, 0.5) == doctest::Approx(manual).epsilon(1e-12));
    CHECK(v2(bench, 0.5, 2.0, 0.5) == doctest::Approx(3.1739290718679674).epsilon(1e-9));
    CHECK(v2(bench, 2.0, 2.0, 0.5) == doctest::Approx(6.1473103463182390).epsilon(1e-9));

    const QueueSpec mm = oracles::mm_inf_spec(3.0, 2.0);
    CHECK(v2(mm, 2.0, 1.0, 0.5) ==
          doctest::Approx(std::exp(-1.0) * 1.5 * (1.0 - std::exp(-2.0))).epsilon(1e-12));
}

TEST_CASE("model-0 reduction: v1 equals v2 when service rates coincide") {
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 5; ++rep) {
        QueueSpec spec = oracles::random_spec(rng, 2);
        Vector mu(2);
        const double m = 0.4 + 2.0 * std::uniform_real_distribution<double>()(rng);
        mu << m, m;
        const QueueSpec model0(spec.gen, spec.lambda, mu);
        std::uniform_real_distribution<double> adist(0.2, 2.0);
        const double alpha = adist(rng), t = adist(rng) + 0.2, u = adist(rng) - 0.2;
        CHECK(std::abs(v1(model0, alpha, t, u) - v2(model0, alpha, t, u)) < 1e-9);
    }
}

TEST_CASE("v1 decays in u at rate mu_inf") {
    const QueueSpec bench = oracles::bench_spec();
    // log-linear regression of v1(2, u) over u in [0, 3]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = 31;
    for (int i = 0; i < n; ++i) {
        const double u = 3.0 * i / (n - 1);
        const double y = std::log(v1(bench, 0.5, 2.0, u));
        sx += u;
        sy += y;
        sxx += u * u;
        sxy += u * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double mu = mu_inf(bench, stationary_distribution(bench.gen));
    CHECK(std::abs(slope + mu) < 0.01 * mu);
}

TEST_CASE("diffusion clocks") {
    const QueueSpec mm = oracles::mm_inf_spec(3.0, 2.0);
    CHECK(diffusion_W(mm, 0.0) == 0.0);
    CHECK(diffusion_W(mm, 1.0) == doctest::Approx(4.703002924854919).epsilon(1e-13));
    auto w_int = [&](double s) { return 2.0 * 1.5 * (1.0 - std::exp(-2.0 * s)); };
    const double oracle = 3.0 * 1.0 + oracles::trapezoid_richardson(w_int, 0.0, 1.0, 1e-11);
    CHECK(diffusion_W(mm, 1.0) == doctest::Approx(oracle).epsilon(1e-9));
    // slope approaches 2 lambda_inf
    CHECK(diffusion_W_rate(mm, 50.0) == doctest::Approx(6.0).epsilon(1e-12));

    const QueueSpec bench = oracles::bench_spec();
    // V(t) is the undamped clock; varsigma1 is the damped OU response - they differ
    CHECK(variance_clock(bench, 2.0) > varsigma1(bench, 2.0));
    const double grad = (variance_clock(bench, 2.0 + 1e-6) - variance_clock(bench, 2.0)) / 1e-6;
    CHECK(grad == doctest::Approx(variance_clock_rate(bench, 2.0)).epsilon(1e-5));

    // per-type clocks, spot-checked against quadrature
    for (int i = 0; i < 2; ++i) {
        const Vector pi = stationary_distribution(bench.gen);
        auto f = [&](double s) {
            return bench.mu(i) * pi(i) * bench.lambda(i) / bench.mu(i) *
                   (1.0 - std::exp(-bench.mu(i) * s));
        };
        const double expected =
            bench.lambda(i) * pi(i) * 1.5 + oracles::trapezoid_richardson(f, 0.0, 1.5, 1e-11);
        CHECK(poisson_clock_type(bench, i, 1.5) == doctest::Approx(expected).epsilon(1e-9));
        CHECK(poisson_clock_rate_type(bench, i, 1e3) ==
              doctest::Approx(2.0 * bench.lambda(i) * pi(i)).epsilon(1e-12));
    }
}

TEST_CASE("diffusion matrix V") {
    const QueueSpec mm = oracles::mm_inf_spec();
    CHECK(diffusion_V_matrix(mm)(0, 0) == 0.0);

    const QueueSpec bench = oracles::bench_spec();
    const Matrix v = diffusion_V_matrix(bench);
    CHECK(v(0, 0) == doctest::Approx(20.0).epsilon(1e-10));
    CHECK(v(0, 1) == doctest::Approx(-10.0).epsilon(1e-10));
    CHECK(v(1, 1) == doctest::Approx(5.0).epsilon(1e-10));
    CHECK((v - v.transpose()).cwiseAbs().maxCoeff() == 0.0);

    Eigen::SelfAdjointEigenSolver<Matrix> es(v);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);

    const Matrix factor = diffusion_V_factor(bench);
    CHECK((factor * factor.transpose() - v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ou_cov_m2 branches and the summation identity") {
    const QueueSpec bench = oracles::bench_spec();
    CHECK(ou_cov_m2(bench, 0, 1, 0.0, OuBranch::slow) == 0.0);
    CHECK(ou_cov_m2(oracles::mm_inf_spec(), 0, 0, 2.0, OuBranch::slow) == 0.0);
    CHECK(ou_cov_m2(bench, 0, 1, 2.0, OuBranch::fast) == 0.0);
    CHECK(ou_cov_m2(bench, 1, 1, 2.0, OuBranch::fast) ==
          doctest::Approx(rho2_i(bench, 1, 2.0)).epsilon(1e-13));

    // sum_ij Cov(M~_i, M~_j) at t equals v2's slow branch at u = 0
    double total = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) total += ou_cov_m2(bench, i, j, 2.0, OuBranch::slow);
    CHECK(total == doctest::Approx(v2(bench, 0.5, 2.0, 0.0)).epsilon(1e-10));
}

TEST_SUITE_END();
