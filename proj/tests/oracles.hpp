#pragma once

// Test-only reference implementations, kept independent of the library paths
// they are used to check.

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "mmiq/chain.hpp"

namespace oracles {

using mmiq::Matrix;
using mmiq::Vector;

// Matrix exponential by scaled Taylor summation (independent of the Pade
// scaling-and-squaring path used by the library).
inline Matrix expm_series(const Matrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.25) {
        scale *= 0.5;
        ++squarings;
    }
    const Matrix as = a * scale;
    Matrix term = Matrix::Identity(a.rows(), a.cols());
    Matrix sum = term;
    for (int n = 1; n < 60; ++n) {
        term = (term * as) / static_cast<double>(n);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff()) break;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

// Composite-trapezoid quadrature with one Richardson extrapolation step,
// refined until stable.
inline double trapezoid_richardson(const std::function<double(double)>& f, double a, double b,
                                   double tol = 1e-9) {
    if (!(b > a)) return 0.0;
    auto trap = [&](long n) {
        const double h = (b - a) / static_cast<double>(n);
        double s = 0.5 * (f(a) + f(b));
        for (long i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
        return s * h;
    };
    double coarse = trap(64);
    for (long n = 128; n <= (1L << 22); n *= 2) {
        const double fine = trap(n);
        const double rich = (4.0 * fine - coarse) / 3.0;
        const double prev_rich = (4.0 * coarse - trap(n / 4)) / 3.0;
        if (std::abs(rich - prev_rich) < tol) return rich;
        coarse = fine;
    }
    return coarse;
}

// One-dimensional adaptive Simpson, used to build nested double integrals for
// the Appendix-style kernel checks.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 0, double fa = std::nan(""), double fm = std::nan(""),
                      double fb = std::nan("")) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    if (std::isnan(fa)) {
        fa = f(a);
        fm = f(m);
        fb = f(b);
    }
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 24 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, 0.5 * tol, depth + 1, fa, flm, fm) +
           simpson(f, m, b, 0.5 * tol, depth + 1, fm, frm, fb);
}

// Random irreducible generator with all off-diagonal rates positive.
inline Matrix random_generator(std::mt19937_64& rng, int d, double lo = 0.2, double hi = 5.0) {
    std::uniform_real_distribution<double> rate(lo, hi);
    Matrix q = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        double row = 0.0;
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            q(i, j) = rate(rng);
            row += q(i, j);
        }
        q(i, i) = -row;
    }
    return q;
}

inline Vector random_vector(std::mt19937_64& rng, int d, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = dist(rng);
    return v;
}

inline mmiq::QueueSpec random_spec(std::mt19937_64& rng, int d) {
    return mmiq::QueueSpec(mmiq::Generator(random_generator(rng, d)),
                           random_vector(rng, d, 0.5, 25.0), random_vector(rng, d, 0.4, 3.0));
}

// The section-7 two-state scenario (q12 = q21 = 5, lambda = [20, 10]).
inline mmiq::QueueSpec bench_spec(double mu1 = 1.0, double mu2 = 2.0) {
    Matrix q(2, 2);
    q << -5.0, 5.0, 5.0, -5.0;
    Vector lam(2), mu(2);
    lam << 20.0, 10.0;
    mu << mu1, mu2;
    return mmiq::QueueSpec(mmiq::Generator(q), lam, mu);
}

inline mmiq::QueueSpec mm_inf_spec(double lam = 3.0, double mu = 2.0) {
    Matrix q(1, 1);
    q << 0.0;
    Vector l(1), m(1);
    l << lam;
    m << mu;
    return mmiq::QueueSpec(mmiq::Generator(q), l, m);
}

}  // namespace oracles
