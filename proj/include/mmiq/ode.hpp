#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mmiq/errors.hpp"

namespace mmiq {

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    // Step-collapse guard: give up once h < min_step_frac * horizon.
    double min_step_frac = 1e-12;
    std::int64_t max_steps = 100'000'000;
};

// Adaptive embedded Runge-Kutta 4(5), Dormand-Prince coefficients.
// Integrates y' = rhs(t, y) from grid.front() to grid.back() and reports the
// solution exactly at every grid point; values interior to a step come from
// cubic Hermite interpolation of the accepted step.
//
// `on_grid(index, t, y)` is invoked once per grid point, in order.
template <class Rhs, class OnGrid>
void integrate_dopri5(Rhs&& rhs, Eigen::VectorXd y, std::span<const double> grid,
                      OnGrid&& on_grid, const OdeOptions& opt = {}) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 5th-minus-4th order error weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (grid.size() < 1) return;
    double t = grid.front();
    std::size_t gi = 0;
    // leading grid point(s) at t0
    while (gi < grid.size() && grid[gi] == t) {
        on_grid(gi, t, y);
        ++gi;
    }
    if (gi == grid.size()) return;
    const double t_end = grid.back();
    const double horizon = t_end - t;
    if (horizon <= 0.0)
        throw Error("integrate_dopri5: grid must be strictly increasing");

    const auto n = y.size();
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);
    rhs(t, y, k1);

    double h = horizon / 100.0;
    std::int64_t steps = 0;
    while (t < t_end) {
        if (++steps > opt.max_steps)
            throw OdeToleranceFailure("integrate_dopri5: step budget exhausted");
        if (h < opt.min_step_frac * horizon)
            throw OdeToleranceFailure(
                "integrate_dopri5: step size collapsed; system too stiff for the "
                "requested tolerance");
        h = std::min(h, t_end - t);

        ytmp = y + h * (a21 * k1);
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, ynew, k7);  // FSAL
        yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double scale =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(yerr[i]) / scale);
        }

        if (err <= 1.0) {
            const double t_new = t + h;
            // report grid points covered by this step (cubic Hermite dense output)
            while (gi < grid.size() && grid[gi] <= t_new + 1e-14 * horizon) {
                const double tg = grid[gi];
                if (tg >= t_new - 1e-14 * horizon) {
                    on_grid(gi, tg, ynew);
                } else {
                    const double s = (tg - t) / h;
                    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
                    const double h10 = s * (1 - s) * (1 - s);
                    const double h01 = s * s * (3 - 2 * s);
                    const double h11 = s * s * (s - 1);
                    ytmp = h00 * y + (h10 * h) * k1 + h01 * ynew + (h11 * h) * k7;
                    on_grid(gi, tg, ytmp);
                }
                ++gi;
            }
            t = t_new;
            y.swap(ynew);
            k1.swap(k7);
            if (gi == grid.size()) return;
        }
        const double factor =
            err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
}

}  // namespace mmiq
