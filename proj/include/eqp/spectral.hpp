#pragma once

#include "eqp/rng.hpp"
#include "eqp/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eqp {

class PowerIterationError : public std::runtime_error {
public:
    PowerIterationError(double estimate, int iterations)
        : std::runtime_error("power iteration did not converge after " +
                             std::to_string(iterations) +
                             " iterations (last estimate " + std::to_string(estimate) + ")"),
          last_estimate(estimate),
          iterations(iterations) {}

    double last_estimate;
    int iterations;
};

/// Largest singular value of A, by power iteration on A^T A.
/// Works for any square or rectangular dense matrix; for symmetric A this
/// equals the largest |eigenvalue|.
template <class Scalar>
Scalar spectral_norm(const MatrixX<Scalar>& A, Scalar rel_tol = Scalar(1e-8),
                     int max_iter = 10000) {
    if (A.size() == 0) return Scalar(0);
    Rng rng(0x5eedULL);
    VectorX<Scalar> v = rng.uniform_vector<Scalar>(A.cols(), -1.0, 1.0);
    Scalar vn = v.norm();
    if (vn == Scalar(0)) v.setOnes();
    v /= v.norm();

    Scalar est = Scalar(0);
    VectorX<Scalar> u(A.rows());
    for (int k = 0; k < max_iter; ++k) {
        u.noalias() = A * v;
        const Scalar un = u.norm();
        if (un == Scalar(0)) return Scalar(0); // v in the null space and A^T A v = 0
        v.noalias() = A.transpose() * u;
        const Scalar wn = v.norm();
        if (wn == Scalar(0)) return un;
        v /= wn;
        const Scalar prev = est;
        est = un; // ||A v|| with unit v converges to sigma_max
        if (k > 0 && std::abs(est - prev) <= rel_tol * std::max(est, Scalar(1e-300))) {
            return est;
        }
    }
    throw PowerIterationError(static_cast<double>(est), max_iter);
}

} // namespace eqp
