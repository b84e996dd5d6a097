#include <doctest.h>

#include <cmath>
#include <random>

#include "mmiq/chain.hpp"
#include "mmiq/quadrature.hpp"
#include "oracles.hpp"

using namespace mmiq;

namespace {

Generator two_state(double q12, double q21) {
    Matrix q(2, 2);
    q << -q12, q12, q21, -q21;
    return Generator(q);
}

}  // namespace

TEST_SUITE_BEGIN("chain");

TEST_CASE("construction rejects bad generators") {
    Matrix neg(2, 2);
    neg << -1.0, 1.0, -0.5, 0.5;  // negative off-diagonal
    CHECK_THROWS_AS(Generator{neg}, Error);

    Matrix rowsum(2, 2);
    rowsum << -1.0, 1.5, 1.0, -1.0;
    CHECK_THROWS_AS(Generator{rowsum}, Error);

    Matrix reducible(2, 2);
    reducible << -1.0, 1.0, 0.0, 0.0;  // absorbing second state
    CHECK_THROWS_AS(Generator{reducible}, Error);

    Matrix reducible3(3, 3);
    reducible3 << -1.0, 1.0, 0.0, 1.0, -1.0, 0.0, 1.0, 0.0, -1.0;  // state 3 unreachable
    CHECK_THROWS_AS(Generator{reducible3}, Error);
}

TEST_CASE("stationary distribution examples") {
    const Vector pi_sym = stationary_distribution(two_state(5.0, 5.0));
    CHECK(pi_sym(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pi_sym(1) == doctest::Approx(0.5).epsilon(1e-14));

    Matrix single(1, 1);
    single << 0.0;
    const Vector pi1 = stationary_distribution(Generator(single));
    CHECK(pi1(0) == 1.0);

    const Vector pi = stationary_distribution(two_state(1.0, 3.0));
    CHECK(pi(0) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(pi(1) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("transition matrix examples") {
    const Generator gen = two_state(5.0, 5.0);
    CHECK((transition_matrix(gen, 0.0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

    const Matrix p = transition_matrix(gen, 0.1);
    const double diag = 0.5 * (1.0 + std::exp(-1.0));
    CHECK(p(0, 0) == doctest::Approx(diag).epsilon(1e-12));
    CHECK(p(0, 1) == doctest::Approx(1.0 - diag).epsilon(1e-12));
    CHECK(p(1, 1) == doctest::Approx(diag).epsilon(1e-12));

    const Matrix p_inf = transition_matrix(gen, 100.0);
    CHECK((p_inf - Matrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(transition_matrix(gen, -0.1), Error);
}

TEST_CASE("transition matrix vs series oracle and semigroup property") {
    std::mt19937_64 rng(17);
    for (int d : {2, 3, 4}) {
        const Generator gen{oracles::random_generator(rng, d)};
        std::uniform_real_distribution<double> dist(0.05, 1.5);
        const double s = dist(rng), t = dist(rng);
        CHECK((transition_matrix(gen, t) - oracles::expm_series(gen.rates() * t))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
        const Matrix lhs = transition_matrix(gen, s + t);
        const Matrix rhs = transition_matrix(gen, s) * transition_matrix(gen, t);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
        for (int i = 0; i < d; ++i)
            CHECK(transition_matrix(gen, t).row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("deviation matrix examples") {
    Matrix single(1, 1);
    single << 0.0;
    CHECK(deviation_matrix(Generator(single))(0, 0) == 0.0);

    const Matrix d_sym = deviation_matrix(two_state(5.0, 5.0));
    CHECK(d_sym(0, 0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(d_sym(0, 1) == doctest::Approx(-0.05).epsilon(1e-12));

    const Matrix d13 = deviation_matrix(two_state(1.0, 3.0));
    CHECK(d13(0, 0) == doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(d13(0, 1) == doctest::Approx(-0.0625).epsilon(1e-12));
    CHECK(d13(1, 0) == doctest::Approx(-0.1875).epsilon(1e-12));
    CHECK(d13(1, 1) == doctest::Approx(0.1875).epsilon(1e-12));
}

TEST_CASE("deviation matrix equals the truncated quadrature of P(t) - Pi") {
    std::mt19937_64 rng(23);
    for (int d : {2, 3, 4}) {
        const Generator gen{oracles::random_generator(rng, d)};
        const auto chain = ChainAnalysis::analyze(gen);
        auto integrand = [&](double t) -> Matrix { return transition_matrix(gen, t) - chain.Pi; };
        const Matrix quad = integrate_matrix(integrand, 0.0, 40.0 / chain.gap, 1e-9);
        CHECK((quad - chain.D).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("chain identity suite on random generators") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 2 + static_cast<int>(rng() % 4);
        const Generator gen{oracles::random_generator(rng, d)};
        const auto c = ChainAnalysis::analyze(gen);
        const Matrix id = Matrix::Identity(d, d);
        const Vector ones = Vector::Ones(d);
        CHECK((gen.rates() * c.F - (c.Pi - id)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((c.F * gen.rates() - (c.Pi - id)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((c.Pi * c.F - c.Pi).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((c.F * c.Pi - c.Pi).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((c.F * ones - ones).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((c.Pi * ones - ones).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((c.D * ones).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((c.pi.transpose() * c.D).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((c.pi.transpose() * gen.rates()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(c.pi.sum() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("spectral gap") {
    CHECK(spectral_gap(two_state(5.0, 5.0)) == doctest::Approx(10.0).epsilon(1e-10));
    CHECK(spectral_gap(two_state(1.0, 3.0)) == doctest::Approx(4.0).epsilon(1e-10));
    Matrix single(1, 1);
    single << 0.0;
    CHECK(std::isinf(spectral_gap(Generator(single))));
}

TEST_CASE("weighted deviation matrix") {
    const Generator gen = two_state(5.0, 5.0);
    const Matrix dev = deviation_matrix(gen);

    SUBCASE("gamma = 0 reduces to D") {
        const Matrix got = weighted_deviation_matrix(gen, Vector::Zero(2));
        CHECK((got - dev).cwiseAbs().maxCoeff() < 1e-9);
    }

    SUBCASE("closed form for the symmetric two-state chain") {
        // rows of P(t) - Pi are +-0.5 e^{-10 t}; row weight gamma_i gives 0.5/(gamma_i + 10)
        Vector gamma(2);
        gamma << 1.0, 2.0;
        const Matrix got = weighted_deviation_matrix(gen, gamma);
        CHECK(got(0, 0) == doctest::Approx(0.5 / 11.0).epsilon(1e-9));
        CHECK(got(0, 1) == doctest::Approx(-0.5 / 11.0).epsilon(1e-9));
        CHECK(got(1, 0) == doctest::Approx(-0.5 / 12.0).epsilon(1e-9));
        CHECK(got(1, 1) == doctest::Approx(0.5 / 12.0).epsilon(1e-9));
    }

    SUBCASE("single state") {
        Matrix single(1, 1);
        single << 0.0;
        Vector gamma(1);
        gamma << 3.0;
        CHECK(weighted_deviation_matrix(Generator(single), gamma)(0, 0) == 0.0);
    }

    SUBCASE("mixed zero and positive weights") {
        Vector gamma(2);
        gamma << 0.0, 2.0;
        const Matrix got = weighted_deviation_matrix(gen, gamma);
        CHECK((got.row(0) - dev.row(0)).cwiseAbs().maxCoeff() == 0.0);
        CHECK(got(1, 1) == doctest::Approx(0.5 / 12.0).epsilon(1e-9));
    }

    SUBCASE("resolvent oracle on a random chain") {
        // rows with gamma_i > 0 equal rows of (gamma_i I - Q)^{-1} - Pi / gamma_i
        std::mt19937_64 rng(31);
        const Generator g3{oracles::random_generator(rng, 3)};
        const auto c = ChainAnalysis::analyze(g3);
        Vector gamma(3);
        gamma << 0.7, 1.3, 2.9;
        const Matrix got = weighted_deviation_matrix(g3, gamma);
        for (int i = 0; i < 3; ++i) {
            const Matrix res =
                (gamma(i) * Matrix::Identity(3, 3) - g3.rates()).inverse() - c.Pi / gamma(i);
            CHECK((got.row(i) - res.row(i)).cwiseAbs().maxCoeff() < 1e-9);
        }
    }

    CHECK_THROWS_AS(weighted_deviation_matrix(gen, Vector::Ones(3)), DimensionMismatch);
    Vector neg(2);
    neg << -1.0, 1.0;
    CHECK_THROWS_AS(weighted_deviation_matrix(gen, neg), Error);
}

TEST_CASE("queue spec validation and scaling") {
    Vector lam(2), mu(2);
    lam << 20.0, 10.0;
    mu << 1.0, 2.0;
    CHECK_THROWS_AS(QueueSpec(two_state(5, 5), Vector::Ones(3), mu), DimensionMismatch);
    Vector bad_mu(2);
    bad_mu << 1.0, 0.0;
    CHECK_THROWS_AS(QueueSpec(two_state(5, 5), lam, bad_mu), Error);

    const QueueSpec spec(two_state(5, 5), lam, mu);
    const ScalingParams sc{10.0, 0.5};
    const QueueSpec scaled = spec.scaled(sc);
    CHECK(scaled.lambda(0) == doctest::Approx(200.0));
    CHECK(scaled.gen.rates()(0, 1) == doctest::Approx(5.0 * std::sqrt(10.0)));
    CHECK((scaled.mu - mu).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scaling exponent beta") {
    CHECK(ScalingParams{1.0, 0.5}.beta() == doctest::Approx(0.75));
    CHECK(ScalingParams{1.0, 1.0}.beta() == doctest::Approx(0.5));
    CHECK(ScalingParams{1.0, 2.0}.beta() == doctest::Approx(0.5));
    CHECK(ScalingParams{1.0, 0.0}.beta() == doctest::Approx(1.0));
}

TEST_SUITE_END();
