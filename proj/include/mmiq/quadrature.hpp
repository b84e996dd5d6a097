#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "mmiq/errors.hpp"

namespace mmiq {

// 15-point Gauss-Legendre panel on [-1, 1].
inline constexpr int kGlPoints = 15;
inline constexpr double kGlNode[kGlPoints] = {
    -0.98799251802048543, -0.93727339240070590, -0.84820658341042721,
    -0.72441773136017007, -0.57097217260853883, -0.39415134707756336,
    -0.20119409399743451,  0.0,                  0.20119409399743451,
     0.39415134707756336,  0.57097217260853883,  0.72441773136017007,
     0.84820658341042721,  0.93727339240070590,  0.98799251802048543};
inline constexpr double kGlWeight[kGlPoints] = {
    0.030753241996118647, 0.070366047488108071, 0.107159220467171770,
    0.139570677926153910, 0.166269205816993780, 0.186161000015561880,
    0.198431485327111250, 0.202578241925560900, 0.198431485327111250,
    0.186161000015561880, 0.166269205816993780, 0.139570677926153910,
    0.107159220467171770, 0.070366047488108071, 0.030753241996118647};

namespace detail {

template <class F>
double gl15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kGlPoints; ++i)
        acc += kGlWeight[i] * f(mid + half * kGlNode[i]);
    return acc * half;
}

template <class F>
double adapt(const F& f, double a, double b, double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl15(f, a, mid);
    const double right = gl15(f, mid, b);
    const double refined = left + right;
    if (std::abs(refined - whole) <= tol || std::abs(refined - whole) <= 1e-15 * std::abs(refined))
        return refined;
    if (depth >= 30)
        throw QuadratureFailure("adaptive Gauss-Legendre: bisection depth exhausted");
    return adapt(f, a, mid, left, 0.5 * tol, depth + 1) +
           adapt(f, mid, b, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Adaptive Gauss-Legendre quadrature, absolute tolerance.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-10) {
    if (!(b > a)) return 0.0;
    return detail::adapt(f, a, b, detail::gl15(f, a, b), abs_tol, 0);
}

namespace detail {

template <class F>
Eigen::MatrixXd gl15_mat(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Eigen::MatrixXd acc = kGlWeight[0] * f(mid + half * kGlNode[0]);
    for (int i = 1; i < kGlPoints; ++i)
        acc += kGlWeight[i] * f(mid + half * kGlNode[i]);
    return acc * half;
}

template <class F>
Eigen::MatrixXd adapt_mat(const F& f, double a, double b, const Eigen::MatrixXd& whole,
                          double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const Eigen::MatrixXd left = gl15_mat(f, a, mid);
    const Eigen::MatrixXd right = gl15_mat(f, mid, b);
    Eigen::MatrixXd refined = left + right;
    const double err = (refined - whole).cwiseAbs().maxCoeff();
    if (err <= tol || err <= 1e-15 * refined.cwiseAbs().maxCoeff())
        return refined;
    if (depth >= 30)
        throw QuadratureFailure("adaptive Gauss-Legendre (matrix): bisection depth exhausted");
    return adapt_mat(f, a, mid, left, 0.5 * tol, depth + 1) +
           adapt_mat(f, mid, b, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Entrywise adaptive quadrature of a matrix-valued integrand.
template <class F>
Eigen::MatrixXd integrate_matrix(const F& f, double a, double b, double abs_tol = 1e-10) {
    if (!(b > a)) {
        Eigen::MatrixXd z = f(a);
        z.setZero();
        return z;
    }
    return detail::adapt_mat(f, a, b, detail::gl15_mat(f, a, b), abs_tol, 0);
}

}  // namespace mmiq
