#pragma once

#include "eqp/bifunctions.hpp"
#include "eqp/prox.hpp"
#include "eqp/sets.hpp"
#include "eqp/types.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace eqp {

class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters of the inertial double-correction subgradient extragradient
/// iteration. alpha weights the inertial term, delta the two correction
/// terms, mu the adaptive-stepsize safety factor, lambda0 the initial
/// stepsize.
template <class Scalar>
struct SolverParams {
    Scalar alpha = Scalar(0);
    Scalar delta = Scalar(0.5);
    Scalar mu = Scalar(0.5);
    Scalar lambda0 = Scalar(0.1);
    int max_iter = 5001;
    Scalar eps_stop = Scalar(1e-6);
    std::optional<Scalar> eps_exact{}; // defaults to eps_stop
    double inner_tol = 1e-10;          // prox subproblem residual target
};

/// Smallest admissible correction weight for a given inertial weight,
/// max{ 2a/(1+a), ((a^2+2) - sqrt(a^4 - 8a^3 - 8a^2 + 4)) / (2a) }.
template <class Scalar>
Scalar delta_lower_bound(Scalar alpha) {
    if (!(alpha > Scalar(0)) || alpha > Scalar(0.5)) {
        throw ParamError("delta_lower_bound: alpha must lie in (0, 1/2], got " +
                         std::to_string(static_cast<double>(alpha)));
    }
    const Scalar a2 = alpha * alpha;
    const Scalar radicand = a2 * a2 - Scalar(8) * a2 * alpha - Scalar(8) * a2 + Scalar(4);
    if (radicand < Scalar(0)) {
        throw ParamError("delta_lower_bound: negative radicand " +
                         std::to_string(static_cast<double>(radicand)));
    }
    const Scalar first = Scalar(2) * alpha / (Scalar(1) + alpha);
    const Scalar second = (a2 + Scalar(2) - std::sqrt(radicand)) / (Scalar(2) * alpha);
    return std::max(first, second);
}

/// Accepts exactly the parameter region of the convergence analysis:
/// alpha in [0, 1/2], delta in (0, 1) with delta > delta_lower_bound(alpha)
/// when alpha > 0. The degenerate pair alpha = delta = 0 is admitted as the
/// plain subgradient extragradient reduction.
template <class Scalar>
void validate_params(const SolverParams<Scalar>& p) {
    if (!(p.alpha >= Scalar(0)) || !(p.alpha < Scalar(1))) {
        throw ParamError("alpha must lie in [0, 1), got " +
                         std::to_string(static_cast<double>(p.alpha)));
    }
    if (p.alpha > Scalar(0.5)) {
        throw ParamError("alpha must satisfy alpha <= 1/2, got " +
                         std::to_string(static_cast<double>(p.alpha)));
    }
    if (p.alpha == Scalar(0)) {
        const bool plain_reduction = p.delta == Scalar(0);
        if (!plain_reduction && !(p.delta > Scalar(0) && p.delta < Scalar(1))) {
            throw ParamError("delta must lie in (0, 1) when alpha = 0, got " +
                             std::to_string(static_cast<double>(p.delta)));
        }
    } else {
        const Scalar bound = delta_lower_bound(p.alpha); // also checks the radicand
        if (!(p.delta > bound && p.delta < Scalar(1))) {
            throw ParamError("delta must lie in (" +
                             std::to_string(static_cast<double>(bound)) + ", 1), got " +
                             std::to_string(static_cast<double>(p.delta)));
        }
    }
    if (!(p.mu > Scalar(0) && p.mu < Scalar(1))) {
        throw ParamError("mu must lie in (0, 1), got " +
                         std::to_string(static_cast<double>(p.mu)));
    }
    if (!(p.lambda0 > Scalar(0))) {
        throw ParamError("lambda0 must be positive, got " +
                         std::to_string(static_cast<double>(p.lambda0)));
    }
    if (p.max_iter < 1) throw ParamError("max_iter must be at least 1");
    if (!(p.eps_stop > Scalar(0))) throw ParamError("eps_stop must be positive");
    if (p.eps_exact && !(*p.eps_exact > Scalar(0))) {
        throw ParamError("eps_exact must be positive");
    }
}

/// w_n = y_n + a(y_n - y_{n-1}) + d(1+a)(w_{n-1} - y_n) - a d(w_{n-2} - y_{n-1}).
template <class Scalar>
VectorX<Scalar> extrapolate(const VectorX<Scalar>& y_cur, const VectorX<Scalar>& y_prev,
                            const VectorX<Scalar>& w_prev, const VectorX<Scalar>& w_prev2,
                            Scalar alpha, Scalar delta) {
    check_same_dim(y_cur.size(), y_prev.size(), "extrapolate");
    check_same_dim(y_cur.size(), w_prev.size(), "extrapolate");
    check_same_dim(y_cur.size(), w_prev2.size(), "extrapolate");
    return y_cur + alpha * (y_cur - y_prev) + delta * (Scalar(1) + alpha) * (w_prev - y_cur) -
           alpha * delta * (w_prev2 - y_prev);
}

template <class Scalar>
Scalar stepsize_from_defect(Scalar lambda, Scalar mu, const VectorX<Scalar>& w,
                            const VectorX<Scalar>& z, const VectorX<Scalar>& y_next, Scalar d) {
    if (d > Scalar(0)) {
        const Scalar cand =
            (mu / Scalar(2)) * ((w - z).squaredNorm() + (y_next - z).squaredNorm()) / d;
        return std::min(cand, lambda);
    }
    return lambda;
}

/// Adaptive stepsize: shrink to mu/2 * (|w-z|^2 + |y-z|^2) / d whenever the
/// Lipschitz-type defect d = f(w,y) - f(w,z) - f(z,y) is positive, and never
/// increase.
template <class Scalar, class F>
Scalar stepsize_update(Scalar lambda, Scalar mu, const VectorX<Scalar>& w,
                       const VectorX<Scalar>& z, const VectorX<Scalar>& y_next, const F& f) {
    return stepsize_from_defect(lambda, mu, w, z, y_next, f.defect(w, z, y_next));
}

template <class Scalar>
Scalar stepsize_update(Scalar lambda, Scalar mu, const VectorX<Scalar>& w,
                       const VectorX<Scalar>& z, const VectorX<Scalar>& y_next,
                       const AnyBifunction<Scalar>& f) {
    return std::visit([&](const auto& g) { return stepsize_update(lambda, mu, w, z, y_next, g); },
                      f);
}

enum class Terminal { converged, max_iter, exact_solution };

inline const char* to_string(Terminal t) {
    switch (t) {
        case Terminal::converged: return "converged";
        case Terminal::max_iter: return "max_iter";
        case Terminal::exact_solution: return "exact_solution";
    }
    return "unknown";
}

template <class Scalar>
struct TrajectoryRecord {
    int n;
    Scalar residual;  // E_n, the stopping metric
    Scalar lambda;    // stepsize used at iteration n
    Scalar prox_gap;  // |z_n - w_n|
    double elapsed_s;
};

template <class Scalar>
struct Trajectory {
    std::vector<TrajectoryRecord<Scalar>> records;
    Terminal terminal = Terminal::max_iter;

    int iterations() const { return static_cast<int>(records.size()); }
    Scalar final_residual() const {
        return records.empty() ? Scalar(0) : records.back().residual;
    }
};

template <class Scalar>
struct SolveResult {
    VectorX<Scalar> solution;
    Trajectory<Scalar> trajectory;
};

/// Starting data: w_{-1} = w_{-2} is the usual choice, but any four points
/// of the ambient space are accepted.
template <class Scalar>
struct InitialPoints {
    VectorX<Scalar> y0, y_m1, w_m1, w_m2;
};

template <class Scalar>
struct IterationView {
    int n;
    const VectorX<Scalar>& w;
    const VectorX<Scalar>& z;
    const VectorX<Scalar>& y_next;
    Scalar lambda;
    const Halfspace<Scalar>& separating;
};

template <class Scalar>
using IterationObserver = std::function<void(const IterationView<Scalar>&)>;

namespace detail {

template <class Scalar>
VectorX<Scalar> prox_feasible(const LinearOpBifunction<Scalar>& f, const VectorX<Scalar>& af,
                              const VectorX<Scalar>& aq, Scalar lambda,
                              const FeasibleSet<Scalar>& C, const ProxOptions&) {
    return prox_linear(f, af, aq, lambda, C);
}

template <class Scalar>
VectorX<Scalar> prox_feasible(const QuadraticBifunction<Scalar>& f, const VectorX<Scalar>& af,
                              const VectorX<Scalar>& aq, Scalar lambda,
                              const FeasibleSet<Scalar>& C, const ProxOptions& opts) {
    if (const auto* box = std::get_if<Box<Scalar>>(&C)) {
        return prox_quadratic_box(f, af, aq, lambda, *box, opts).solution;
    }
    throw std::invalid_argument(
        "quadratic bifunctions are supported over box feasible sets only");
}

template <class Scalar>
VectorX<Scalar> prox_halfspace(const LinearOpBifunction<Scalar>& f, const VectorX<Scalar>& af,
                               const VectorX<Scalar>& aq, Scalar lambda,
                               const Halfspace<Scalar>& T, const ProxOptions&) {
    return prox_linear(f, af, aq, lambda, T);
}

template <class Scalar>
VectorX<Scalar> prox_halfspace(const QuadraticBifunction<Scalar>& f, const VectorX<Scalar>& af,
                               const VectorX<Scalar>& aq, Scalar lambda,
                               const Halfspace<Scalar>& T, const ProxOptions& opts) {
    return prox_quadratic_halfspace(f, af, aq, lambda, T, opts).solution;
}

template <class Scalar, class F>
ProxOptions make_inner_options(const F&, double tol) {
    ProxOptions opts;
    opts.tol = tol;
    return opts;
}

template <class Scalar>
ProxOptions make_inner_options(const QuadraticBifunction<Scalar>& f, double tol) {
    ProxOptions opts;
    opts.tol = tol;
    opts.q_norm = static_cast<double>(spectral_norm<Scalar>(f.Q())); // cached once per solve
    return opts;
}

// Per-iteration step provider. The affine-in-y family needs exactly two
// operator applications per iteration (at w_n and at z_n); caching them
// here yields the same bits as recomputing through grad2/defect.
template <class Scalar>
struct LinearStepper {
    const LinearOpBifunction<Scalar>& f;
    VectorX<Scalar> g_w, g_z;

    VectorX<Scalar> prox_C(const VectorX<Scalar>& w, Scalar lambda,
                           const FeasibleSet<Scalar>& C, const ProxOptions&) {
        g_w = f.apply(w);
        return project(C, (w - lambda * g_w).eval());
    }
    const VectorX<Scalar>& subgradient(const VectorX<Scalar>&, const VectorX<Scalar>&) {
        return g_w; // grad2(w, .) is the constant A(w)
    }
    VectorX<Scalar> prox_T(const VectorX<Scalar>& z, const VectorX<Scalar>& w, Scalar lambda,
                           const Halfspace<Scalar>& T, const ProxOptions&) {
        g_z = f.apply(z);
        return project(T, (w - lambda * g_z).eval());
    }
    Scalar defect(const VectorX<Scalar>&, const VectorX<Scalar>& z,
                  const VectorX<Scalar>& y) const {
        return (g_w - g_z).dot(y - z);
    }
};

template <class Scalar>
struct QuadraticStepper {
    const QuadraticBifunction<Scalar>& f;

    VectorX<Scalar> prox_C(const VectorX<Scalar>& w, Scalar lambda, const FeasibleSet<Scalar>& C,
                           const ProxOptions& opts) {
        return prox_feasible(f, w, w, lambda, C, opts);
    }
    VectorX<Scalar> subgradient(const VectorX<Scalar>& w, const VectorX<Scalar>& z) {
        return f.grad2(w, z);
    }
    VectorX<Scalar> prox_T(const VectorX<Scalar>& z, const VectorX<Scalar>& w, Scalar lambda,
                           const Halfspace<Scalar>& T, const ProxOptions& opts) {
        return prox_halfspace(f, z, w, lambda, T, opts);
    }
    Scalar defect(const VectorX<Scalar>& w, const VectorX<Scalar>& z,
                  const VectorX<Scalar>& y) const {
        return f.defect(w, z, y);
    }
};

template <class Scalar>
LinearStepper<Scalar> make_stepper(const LinearOpBifunction<Scalar>& f) {
    return {f, {}, {}};
}

template <class Scalar>
QuadraticStepper<Scalar> make_stepper(const QuadraticBifunction<Scalar>& f) {
    return {f};
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace detail

/// Subgradient extragradient iteration with one inertial and two correction
/// terms and the adaptive stepsize:
///   step 1: w_n by extrapolation, z_n = prox of lambda_n f(w_n, .) at w_n over C;
///           stop as exact when |z_n - w_n| <= eps_exact;
///   step 2: halfspace T_n = {x : <w_n - lambda_n v_n - z_n, x - z_n> <= 0}
///           with v_n = grad2(w_n, z_n), then y_{n+1} = prox of
///           lambda_n f(z_n, .) at w_n over T_n;
///   step 3: lambda update, stop when E_n = |y_{n+1} - y_n| <= eps_stop.
template <class Scalar, class F>
SolveResult<Scalar> solve(const F& f, const FeasibleSet<Scalar>& C,
                          const SolverParams<Scalar>& params, const InitialPoints<Scalar>& start,
                          const IterationObserver<Scalar>& observer = {}) {
    validate_params(params);
    const Index n_dim = dim(C);
    check_same_dim(n_dim, f.dim(), "solve");
    check_same_dim(n_dim, start.y0.size(), "solve.y0");
    check_same_dim(n_dim, start.y_m1.size(), "solve.y_m1");
    check_same_dim(n_dim, start.w_m1.size(), "solve.w_m1");
    check_same_dim(n_dim, start.w_m2.size(), "solve.w_m2");

    const Scalar eps_exact = params.eps_exact.value_or(params.eps_stop);
    const ProxOptions inner = detail::make_inner_options<Scalar>(f, params.inner_tol);
    const detail::Stopwatch clock;
    auto stepper = detail::make_stepper(f);

    VectorX<Scalar> y_prev = start.y_m1;
    VectorX<Scalar> y_cur = start.y0;
    VectorX<Scalar> w_prev = start.w_m1;
    VectorX<Scalar> w_prev2 = start.w_m2;
    Scalar lambda = params.lambda0;

    Trajectory<Scalar> traj;
    for (int n = 0; n < params.max_iter; ++n) {
        VectorX<Scalar> w = extrapolate(y_cur, y_prev, w_prev, w_prev2, params.alpha, params.delta);
        VectorX<Scalar> z = stepper.prox_C(w, lambda, C, inner);
        const Scalar prox_gap = (z - w).norm();
        if (prox_gap <= eps_exact) {
            // z_n = w_n certifies an equilibrium point
            traj.records.push_back({n, prox_gap, lambda, prox_gap, clock.seconds()});
            traj.terminal = Terminal::exact_solution;
            require_finite(z, "solve iterate");
            return {std::move(z), std::move(traj)};
        }
        const VectorX<Scalar>& v = stepper.subgradient(w, z);
        const Halfspace<Scalar> T((w - lambda * v - z).eval(), z);
        VectorX<Scalar> y_next = stepper.prox_T(z, w, lambda, T, inner);
        require_finite(y_next, "solve iterate");
        if (observer) observer(IterationView<Scalar>{n, w, z, y_next, lambda, T});

        const Scalar residual = (y_next - y_cur).norm();
        traj.records.push_back({n, residual, lambda, prox_gap, clock.seconds()});
        lambda = stepsize_from_defect(lambda, params.mu, w, z, y_next,
                                      stepper.defect(w, z, y_next));

        y_prev = std::move(y_cur);
        y_cur = std::move(y_next);
        w_prev2 = std::move(w_prev);
        w_prev = std::move(w);
        if (residual <= params.eps_stop) {
            traj.terminal = Terminal::converged;
            return {std::move(y_cur), std::move(traj)};
        }
    }
    traj.terminal = Terminal::max_iter;
    return {std::move(y_cur), std::move(traj)};
}

template <class Scalar>
SolveResult<Scalar> solve(const AnyBifunction<Scalar>& f, const FeasibleSet<Scalar>& C,
                          const SolverParams<Scalar>& params, const InitialPoints<Scalar>& start,
                          const IterationObserver<Scalar>& observer = {}) {
    return std::visit([&](const auto& g) { return solve(g, C, params, start, observer); }, f);
}

/// Two-prox extragradient baseline with a constant stepsize:
///   y_n = prox of lambda f(x_n, .) at x_n over C,
///   x_{n+1} = prox of lambda f(y_n, .) at x_n over C.
template <class Scalar, class F>
SolveResult<Scalar> solve_egm(const F& f, const FeasibleSet<Scalar>& C, Scalar lambda,
                              const VectorX<Scalar>& x0, int max_iter, Scalar eps_stop,
                              double inner_tol = 1e-10) {
    if (!(lambda > Scalar(0))) throw ParamError("solve_egm: lambda must be positive");
    if (max_iter < 1) throw ParamError("solve_egm: max_iter must be at least 1");
    if (!contains(C, x0)) throw std::invalid_argument("solve_egm: x0 must lie in C");

    const ProxOptions inner = detail::make_inner_options<Scalar>(f, inner_tol);
    const detail::Stopwatch clock;

    VectorX<Scalar> x = x0;
    Trajectory<Scalar> traj;
    for (int n = 0; n < max_iter; ++n) {
        const VectorX<Scalar> y = detail::prox_feasible(f, x, x, lambda, C, inner);
        VectorX<Scalar> x_next = detail::prox_feasible(f, y, x, lambda, C, inner);
        require_finite(x_next, "solve_egm iterate");
        const Scalar residual = (x_next - x).norm();
        traj.records.push_back({n, residual, lambda, (y - x).norm(), clock.seconds()});
        x = std::move(x_next);
        if (residual <= eps_stop) {
            traj.terminal = Terminal::converged;
            return {std::move(x), std::move(traj)};
        }
    }
    traj.terminal = Terminal::max_iter;
    return {std::move(x), std::move(traj)};
}

template <class Scalar>
SolveResult<Scalar> solve_egm(const AnyBifunction<Scalar>& f, const FeasibleSet<Scalar>& C,
                              Scalar lambda, const VectorX<Scalar>& x0, int max_iter,
                              Scalar eps_stop, double inner_tol = 1e-10) {
    return std::visit(
        [&](const auto& g) { return solve_egm(g, C, lambda, x0, max_iter, eps_stop, inner_tol); },
        f);
}

/// Rate constants of the strongly pseudomonotone analysis at alpha = 0:
/// gamma = min{1 - mu, lambda*beta}, omega = (1 - gamma/2)/(1 + gamma/2),
/// rho = omega(1 - delta) + delta, plus a least-squares fit of log E_n over
/// the tail half of the trajectory (rho_empirical = exp(slope)).
template <class Scalar>
struct RateEstimate {
    Scalar gamma, omega, rho;
    Scalar rho_empirical;
    Scalar r_squared;
};

template <class Scalar>
RateEstimate<Scalar> estimate_linear_rate(const Trajectory<Scalar>& traj, Scalar beta, Scalar mu,
                                          Scalar delta, Scalar lambda_inf) {
    if (traj.records.size() < 10) {
        throw std::invalid_argument("estimate_linear_rate: need at least 10 recorded residuals");
    }
    const Scalar gamma = std::min(Scalar(1) - mu, lambda_inf * beta);
    const Scalar omega = (Scalar(1) - gamma / Scalar(2)) / (Scalar(1) + gamma / Scalar(2));
    const Scalar rho = omega * (Scalar(1) - delta) + delta;

    std::vector<double> xs, ys;
    for (std::size_t i = traj.records.size() / 2; i < traj.records.size(); ++i) {
        const double e = static_cast<double>(traj.records[i].residual);
        if (e > 0.0) {
            xs.push_back(static_cast<double>(traj.records[i].n));
            ys.push_back(std::log(e));
        }
    }
    if (xs.size() < 3) {
        throw std::invalid_argument("estimate_linear_rate: tail has too few positive residuals");
    }
    const double m = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / m;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pred = intercept + slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {gamma, omega, rho, static_cast<Scalar>(std::exp(slope)), static_cast<Scalar>(r2)};
}

} // namespace eqp
