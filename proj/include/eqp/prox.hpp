#pragma once

#include "eqp/bifunctions.hpp"
#include "eqp/sets.hpp"
#include "eqp/types.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace eqp {

template <class Scalar>
struct InnerSolveReport {
    VectorX<Scalar> solution;
    int iterations = 0;
    Scalar kkt_residual = Scalar(0);
};

class InnerSolverError : public std::runtime_error {
public:
    InnerSolverError(const std::string& msg, Eigen::VectorXd last, double res, int iters)
        : std::runtime_error(msg + " (residual " + std::to_string(res) + " after " +
                             std::to_string(iters) + " iterations)"),
          last_iterate(std::move(last)),
          residual(res),
          iterations(iters) {}

    Eigen::VectorXd last_iterate;
    double residual;
    int iterations;
};

struct ProxOptions {
    double tol = 1e-10;              // absolute, on the projected-gradient / KKT residual
    int max_iter = 50000;
    std::optional<double> q_norm;    // |Q|_2, when precomputed and cached by the caller
    std::vector<double>* objective_trace = nullptr;
};

/// argmin_{z in set} lambda*f(anchor_f, z) + 1/2 |anchor_q - z|^2 for f
/// affine in its second argument: the objective collapses to
/// 1/2 |z - (anchor_q - lambda*g0)|^2 + const with g0 = grad2(anchor_f, .),
/// so the prox is a single metric projection.
template <class Scalar, class SetT>
VectorX<Scalar> prox_linear(const LinearOpBifunction<Scalar>& f,
                            const VectorX<Scalar>& anchor_f, const VectorX<Scalar>& anchor_q,
                            Scalar lambda, const SetT& set) {
    check_same_dim(anchor_f.size(), anchor_q.size(), "prox_linear");
    const VectorX<Scalar> g0 = f.grad2(anchor_f, anchor_q);
    return project(set, (anchor_q - lambda * g0).eval());
}

namespace detail {

// Gradient data of phi(z) = lambda*(z'Qz + c'z) + 1/2 |z - aq|^2 with
// c = P*anchor_f + r - Q*anchor_f (Q symmetric folds <Qz, anchor_f> into c'z).
template <class Scalar>
struct QuadProxObjective {
    const MatrixX<Scalar>& Q;
    VectorX<Scalar> c;
    const VectorX<Scalar>& aq;
    Scalar lambda;

    QuadProxObjective(const QuadraticBifunction<Scalar>& f, const VectorX<Scalar>& anchor_f,
                      const VectorX<Scalar>& anchor_q, Scalar lam)
        : Q(f.Q()), c(f.P() * anchor_f + f.r() - f.Q() * anchor_f), aq(anchor_q), lambda(lam) {}

    Scalar value(const VectorX<Scalar>& z) const {
        return lambda * (z.dot(Q * z) + c.dot(z)) + Scalar(0.5) * (z - aq).squaredNorm();
    }

    VectorX<Scalar> gradient(const VectorX<Scalar>& z) const {
        return Scalar(2) * lambda * (Q * z) + lambda * c + (z - aq);
    }
};

} // namespace detail

/// Strongly convex box-QP by accelerated projected gradient with step 1/L,
/// L = 2*lambda*|Q|_2 + 1, restarting the momentum whenever the objective
/// would increase (the fallback step is plain projected gradient, which is
/// monotone at this step length). Terminates on the unit-step
/// projected-gradient residual |z - P(z - grad(z))| <= tol.
template <class Scalar>
InnerSolveReport<Scalar> prox_quadratic_box(const QuadraticBifunction<Scalar>& f,
                                            const VectorX<Scalar>& anchor_f,
                                            const VectorX<Scalar>& anchor_q, Scalar lambda,
                                            const Box<Scalar>& box,
                                            const ProxOptions& opts = {}) {
    check_same_dim(anchor_f.size(), anchor_q.size(), "prox_quadratic_box");
    check_same_dim(box.dim(), anchor_q.size(), "prox_quadratic_box");
    if (!(lambda > Scalar(0))) throw std::invalid_argument("prox: lambda must be positive");

    const detail::QuadProxObjective<Scalar> phi(f, anchor_f, anchor_q, lambda);
    const Scalar nq = opts.q_norm ? static_cast<Scalar>(*opts.q_norm)
                                  : spectral_norm<Scalar>(f.Q());
    const Scalar L = Scalar(2) * lambda * nq + Scalar(1);

    VectorX<Scalar> z = project(box, anchor_q);
    VectorX<Scalar> y = z;
    Scalar t = Scalar(1);
    Scalar fz = phi.value(z);
    if (opts.objective_trace) opts.objective_trace->push_back(static_cast<double>(fz));

    Scalar resid = Scalar(0);
    for (int k = 0; k < opts.max_iter; ++k) {
        resid = (z - project(box, (z - phi.gradient(z)).eval())).norm();
        if (resid <= static_cast<Scalar>(opts.tol)) {
            return {std::move(z), k, resid};
        }
        VectorX<Scalar> z_new = project(box, (y - phi.gradient(y) / L).eval());
        Scalar fz_new = phi.value(z_new);
        if (fz_new > fz) { // momentum overshoot: restart from the last iterate
            y = z;
            t = Scalar(1);
            z_new = project(box, (y - phi.gradient(y) / L).eval());
            fz_new = phi.value(z_new);
        }
        const Scalar t_next = (Scalar(1) + std::sqrt(Scalar(1) + Scalar(4) * t * t)) / Scalar(2);
        y = z_new + ((t - Scalar(1)) / t_next) * (z_new - z);
        t = t_next;
        z = std::move(z_new);
        fz = fz_new;
        if (opts.objective_trace) opts.objective_trace->push_back(static_cast<double>(fz));
    }
    throw InnerSolverError("prox_quadratic_box: max_iter exceeded",
                           z.template cast<double>(), static_cast<double>(resid),
                           opts.max_iter);
}

namespace detail {

// CG for (2*lambda*Q + I) x = b. Relative residual tolerance; errors out
// when the best residual has not improved for 50 consecutive iterations.
template <class Scalar>
VectorX<Scalar> cg_solve_shifted(const MatrixX<Scalar>& Q, Scalar two_lambda,
                                 const VectorX<Scalar>& b, double tol) {
    const Index n = b.size();
    const Scalar bnorm = b.norm();
    VectorX<Scalar> x = VectorX<Scalar>::Zero(n);
    if (bnorm == Scalar(0)) return x;

    auto apply_H = [&](const VectorX<Scalar>& v) -> VectorX<Scalar> {
        return two_lambda * (Q * v) + v;
    };

    VectorX<Scalar> r = b; // x = 0
    VectorX<Scalar> p = r;
    Scalar rs = r.squaredNorm();
    Scalar best = std::sqrt(rs);
    int since_improvement = 0;
    const int cap = static_cast<int>(10 * n + 100);
    for (int k = 0; k < cap; ++k) {
        if (std::sqrt(rs) <= static_cast<Scalar>(tol) * bnorm) return x;
        const VectorX<Scalar> Hp = apply_H(p);
        const Scalar alpha = rs / p.dot(Hp);
        x += alpha * p;
        r -= alpha * Hp;
        const Scalar rs_new = r.squaredNorm();
        const Scalar rn = std::sqrt(rs_new);
        if (rn < best) {
            best = rn;
            since_improvement = 0;
        } else if (++since_improvement >= 50) {
            throw InnerSolverError("conjugate gradient stagnated", x.template cast<double>(),
                                   static_cast<double>(rn), k + 1);
        }
        p = r + (rs_new / rs) * p;
        rs = rs_new;
    }
    throw InnerSolverError("conjugate gradient did not converge", x.template cast<double>(),
                           static_cast<double>(std::sqrt(rs)), cap);
}

} // namespace detail

/// Prox of the quadratic family over a halfspace, via the KKT system with a
/// single multiplier: solve (2*lambda*Q + I) z = anchor_q - lambda*c; if the
/// constraint is violated, correct along H^{-1} a with
/// nu = <a, z* - anchor> / <a, H^{-1} a> (second CG solve).
template <class Scalar>
InnerSolveReport<Scalar> prox_quadratic_halfspace(const QuadraticBifunction<Scalar>& f,
                                                  const VectorX<Scalar>& anchor_f,
                                                  const VectorX<Scalar>& anchor_q, Scalar lambda,
                                                  const Halfspace<Scalar>& hs,
                                                  const ProxOptions& opts = {}) {
    check_same_dim(anchor_f.size(), anchor_q.size(), "prox_quadratic_halfspace");
    check_same_dim(hs.dim(), anchor_q.size(), "prox_quadratic_halfspace");
    if (!(lambda > Scalar(0))) throw std::invalid_argument("prox: lambda must be positive");

    const detail::QuadProxObjective<Scalar> phi(f, anchor_f, anchor_q, lambda);
    const Scalar two_lambda = Scalar(2) * lambda;
    const VectorX<Scalar> b = anchor_q - lambda * phi.c;

    VectorX<Scalar> z = detail::cg_solve_shifted(f.Q(), two_lambda, b, opts.tol);
    Scalar nu = Scalar(0);
    int iterations = 1;
    if (!hs.whole_space()) {
        const Scalar viol = hs.normal.dot(z - hs.anchor);
        if (viol > Scalar(0)) {
            const VectorX<Scalar> s =
                detail::cg_solve_shifted(f.Q(), two_lambda, hs.normal, opts.tol);
            nu = viol / hs.normal.dot(s);
            z -= nu * s;
            iterations = 2;
        }
    }
    const Scalar stationarity =
        (phi.gradient(z) + std::max(nu, Scalar(0)) * hs.normal).norm();
    const Scalar feasibility =
        hs.whole_space() ? Scalar(0) : std::max(Scalar(0), hs.normal.dot(z - hs.anchor));
    return {std::move(z), iterations, std::max(stationarity, feasibility)};
}

} // namespace eqp
