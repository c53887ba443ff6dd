// Test-only oracles, kept independent of the library's solve paths:
// refining grid search, 1-D brute force, central differences.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace oracles {

/// Grid search over [lo, hi]^2 restricted by `feasible`, refined in stages
/// down to `final_res`. When `boundary_snap` is given, each grid point also
/// contributes its snapped image (e.g. the projection onto a constraint
/// plane), so the candidate set samples the boundary at the same resolution
/// instead of through the axis-aligned staircase. Suitable for the strongly
/// convex prox objectives.
inline Eigen::Vector2d grid_search_2d(
    const std::function<double(const Eigen::Vector2d&)>& phi,
    const std::function<bool(const Eigen::Vector2d&)>& feasible, Eigen::Vector2d lo,
    Eigen::Vector2d hi, double final_res,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& boundary_snap = {}) {
    const Eigen::Vector2d lo0 = lo, hi0 = hi;
    double res = std::max(hi.x() - lo.x(), hi.y() - lo.y()) / 80.0;
    res = std::max(res, final_res);
    Eigen::Vector2d best = (lo + hi) / 2;
    double best_val = std::numeric_limits<double>::infinity();

    auto consider = [&](const Eigen::Vector2d& p) {
        if (!feasible(p)) return;
        const double v = phi(p);
        if (v < best_val) {
            best_val = v;
            best = p;
        }
    };

    for (;;) {
        for (double x = lo.x(); x <= hi.x() + res / 2; x += res) {
            for (double y = lo.y(); y <= hi.y() + res / 2; y += res) {
                const Eigen::Vector2d p(std::min(x, hi0.x()), std::min(y, hi0.y()));
                consider(p);
                if (boundary_snap) consider(boundary_snap(p));
            }
        }
        if (!std::isfinite(best_val)) throw std::runtime_error("grid_search_2d: no feasible point");
        if (res <= final_res) return best;
        // window of four previous cells covers the strong-convexity bound
        // on the distance between the grid argmin and the true minimizer
        lo = (best.array() - 4 * res).cwiseMax(lo0.array()).matrix();
        hi = (best.array() + 4 * res).cwiseMin(hi0.array()).matrix();
        res = std::max(res / 16.0, final_res);
    }
}

/// argmin_{t in [lo, hi]} (t - p)^2 over a uniform grid: the 1-D brute-force
/// reference for the componentwise box projection.
inline double closest_on_grid_1d(double p, double lo, double hi, int cells) {
    double best = lo, best_val = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= cells; ++k) {
        const double t = lo + (hi - lo) * k / cells;
        const double v = (t - p) * (t - p);
        if (v < best_val) {
            best_val = v;
            best = t;
        }
    }
    return best;
}

/// Central difference of a scalar function along direction e.
inline double directional_derivative(const std::function<double(const Eigen::VectorXd&)>& f,
                                     const Eigen::VectorXd& x, const Eigen::VectorXd& e,
                                     double h = 1e-5) {
    return (f(x + h * e) - f(x - h * e)) / (2 * h);
}

} // namespace oracles
