#pragma once

#include "eqp/hilbert.hpp"
#include "eqp/sets.hpp"
#include "eqp/spectral.hpp"
#include "eqp/types.hpp"

#include <Eigen/Eigenvalues>

#include <functional>
#include <optional>
#include <utility>
#include <variant>

namespace eqp {

/// f(x, y) = <A(x), y - x> with A either a dense matrix or a black-box
/// apply function. A may depend nonlinearly on x (the first argument is
/// frozen when the prox subproblems are solved); f(x, .) stays affine, so
/// grad2 is the constant vector A(x).
template <class Scalar>
class LinearOpBifunction {
public:
    using Apply = std::function<VectorX<Scalar>(const VectorX<Scalar>&)>;

    explicit LinearOpBifunction(MatrixX<Scalar> A) : dim_(A.rows()), A_(std::move(A)) {
        if (A_->rows() != A_->cols()) {
            throw DimensionError("LinearOpBifunction: matrix must be square");
        }
        require_finite(*A_, "LinearOpBifunction.A");
    }

    LinearOpBifunction(Index dim, Apply apply) : dim_(dim), apply_(std::move(apply)) {
        if (dim_ <= 0) throw std::invalid_argument("LinearOpBifunction: dim must be positive");
    }

    Index dim() const { return dim_; }

    VectorX<Scalar> apply(const VectorX<Scalar>& x) const {
        check_same_dim(dim_, x.size(), "LinearOpBifunction.apply");
        if (A_) return *A_ * x;
        return apply_(x);
    }

    Scalar evaluate(const VectorX<Scalar>& x, const VectorX<Scalar>& y) const {
        check_same_dim(x.size(), y.size(), "LinearOpBifunction.evaluate");
        return apply(x).dot(y - x); // exactly 0 at y == x
    }

    VectorX<Scalar> grad2(const VectorX<Scalar>& x, const VectorX<Scalar>& y) const {
        check_same_dim(x.size(), y.size(), "LinearOpBifunction.grad2");
        return apply(x);
    }

    /// f(w,y) - f(w,z) - f(z,y), telescoped to one inner product.
    Scalar defect(const VectorX<Scalar>& w, const VectorX<Scalar>& z,
                  const VectorX<Scalar>& y) const {
        return (apply(w) - apply(z)).dot(y - z);
    }

    const std::optional<MatrixX<Scalar>>& matrix() const { return A_; }

    std::optional<std::pair<Scalar, Scalar>> lipschitz; // (kappa1, kappa2)

private:
    Index dim_;
    std::optional<MatrixX<Scalar>> A_;
    Apply apply_;
};

/// f(x, y) = <P x + Q y + r, y - x> with P, Q symmetric PSD and P - Q PSD.
template <class Scalar>
class QuadraticBifunction {
public:
    QuadraticBifunction(MatrixX<Scalar> P, MatrixX<Scalar> Q, VectorX<Scalar> r)
        : P_(std::move(P)), Q_(std::move(Q)), r_(std::move(r)) {
        check_same_dim(P_.rows(), P_.cols(), "QuadraticBifunction.P");
        check_same_dim(Q_.rows(), Q_.cols(), "QuadraticBifunction.Q");
        check_same_dim(P_.rows(), Q_.rows(), "QuadraticBifunction");
        check_same_dim(P_.rows(), r_.size(), "QuadraticBifunction.r");
        require_finite(P_, "QuadraticBifunction.P");
        require_finite(Q_, "QuadraticBifunction.Q");
        require_finite(r_, "QuadraticBifunction.r");
        if ((P_ - P_.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) ||
            (Q_ - Q_.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12)) {
            throw std::invalid_argument("QuadraticBifunction: P, Q must be symmetric");
        }
        Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(P_ - Q_,
                                                          Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < Scalar(-1e-8)) {
            throw std::invalid_argument(
                "QuadraticBifunction: P - Q must be positive semidefinite");
        }
    }

    Index dim() const { return r_.size(); }

    Scalar evaluate(const VectorX<Scalar>& x, const VectorX<Scalar>& y) const {
        check_same_dim(x.size(), y.size(), "QuadraticBifunction.evaluate");
        check_same_dim(x.size(), dim(), "QuadraticBifunction.evaluate");
        return (P_ * x + Q_ * y + r_).dot(y - x);
    }

    VectorX<Scalar> grad2(const VectorX<Scalar>& x, const VectorX<Scalar>& y) const {
        check_same_dim(x.size(), y.size(), "QuadraticBifunction.grad2");
        check_same_dim(x.size(), dim(), "QuadraticBifunction.grad2");
        return P_ * x + r_ + Scalar(2) * (Q_ * y) - Q_ * x;
    }

    /// f(w,y) - f(w,z) - f(z,y) = <(P-Q)(w-z), y-z>, exact for symmetric Q.
    Scalar defect(const VectorX<Scalar>& w, const VectorX<Scalar>& z,
                  const VectorX<Scalar>& y) const {
        return ((P_ - Q_) * (w - z)).dot(y - z);
    }

    const MatrixX<Scalar>& P() const { return P_; }
    const MatrixX<Scalar>& Q() const { return Q_; }
    const VectorX<Scalar>& r() const { return r_; }

    std::optional<std::pair<Scalar, Scalar>> lipschitz;

private:
    MatrixX<Scalar> P_, Q_;
    VectorX<Scalar> r_;
};

template <class Scalar>
using AnyBifunction = std::variant<LinearOpBifunction<Scalar>, QuadraticBifunction<Scalar>>;

template <class Scalar>
Scalar evaluate(const AnyBifunction<Scalar>& f, const VectorX<Scalar>& x,
                const VectorX<Scalar>& y) {
    return std::visit([&](const auto& g) { return g.evaluate(x, y); }, f);
}

template <class Scalar>
VectorX<Scalar> grad2(const AnyBifunction<Scalar>& f, const VectorX<Scalar>& x,
                      const VectorX<Scalar>& y) {
    return std::visit([&](const auto& g) { return g.grad2(x, y); }, f);
}

template <class Scalar>
Index dim(const AnyBifunction<Scalar>& f) {
    return std::visit([](const auto& g) { return g.dim(); }, f);
}

template <class Scalar>
std::optional<std::pair<Scalar, Scalar>> lipschitz_metadata(const AnyBifunction<Scalar>& f) {
    return std::visit([](const auto& g) { return g.lipschitz; }, f);
}

/// kappa1 = kappa2 = |P - Q|_2 / 2, spectral norm by power iteration.
template <class Scalar>
std::pair<Scalar, Scalar> lipschitz_constants(const QuadraticBifunction<Scalar>& f,
                                              Scalar rel_tol = Scalar(1e-8),
                                              int max_iter = 10000) {
    const Scalar s = spectral_norm<Scalar>(f.P() - f.Q(), rel_tol, max_iter);
    return {s / Scalar(2), s / Scalar(2)};
}

/// Samples triples (s, w, z) from the set and checks
/// f(s,z) - f(s,w) - f(w,z) <= k1 |s-w|^2 + k2 |w-z|^2 up to 1e-8.
template <class Scalar, class F>
bool check_lipschitz_type(const F& f, const FeasibleSet<Scalar>& set, Scalar kappa1,
                          Scalar kappa2, int samples, Rng rng) {
    if (kappa1 < Scalar(0) || kappa2 < Scalar(0)) {
        throw std::invalid_argument("check_lipschitz_type: constants must be nonnegative");
    }
    for (int k = 0; k < samples; ++k) {
        const VectorX<Scalar> s = sample_uniform(set, rng);
        const VectorX<Scalar> w = sample_uniform(set, rng);
        const VectorX<Scalar> z = sample_uniform(set, rng);
        const Scalar lhs = f.evaluate(s, z) - f.evaluate(s, w) - f.evaluate(w, z);
        const Scalar rhs = kappa1 * (s - w).squaredNorm() + kappa2 * (w - z).squaredNorm();
        if (lhs > rhs + Scalar(1e-8)) return false;
    }
    return true;
}

template <class Scalar>
bool check_lipschitz_type(const AnyBifunction<Scalar>& f, const FeasibleSet<Scalar>& set,
                          Scalar kappa1, Scalar kappa2, int samples, Rng rng) {
    return std::visit(
        [&](const auto& g) { return check_lipschitz_type(g, set, kappa1, kappa2, samples, rng); },
        f);
}

} // namespace eqp
