#pragma once

#include "eqp/types.hpp"

#include <cmath>
#include <span>

namespace eqp {

/// <a, b> = sum_i a_i b_i.
template <class Scalar>
Scalar inner(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
    check_same_dim(a.size(), b.size(), "inner");
    return a.dot(b);
}

template <class Scalar>
Scalar norm(const VectorX<Scalar>& a) {
    return a.norm();
}

/// sum_i coeffs[i] * vectors[i]. All vectors must share one dimension.
template <class Scalar>
VectorX<Scalar> axpy_combine(std::span<const Scalar> coeffs,
                             std::span<const VectorX<Scalar>> vectors) {
    if (coeffs.size() != vectors.size()) {
        throw DimensionError("axpy_combine: coefficient/vector count mismatch");
    }
    if (vectors.empty()) {
        throw std::invalid_argument("axpy_combine: empty combination");
    }
    const Index n = vectors[0].size();
    VectorX<Scalar> out = VectorX<Scalar>::Zero(n);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        check_same_dim(vectors[i].size(), n, "axpy_combine");
        out.noalias() += coeffs[i] * vectors[i];
    }
    require_finite(out, "axpy_combine");
    return out;
}

// Uniform-weight variants for grid discretizations of L^2([0,1]).
// Nothing in the library calls these by default; the plain Euclidean
// product above is used everywhere, including inside e^{-|x|} operators.
template <class Scalar>
Scalar weighted_inner(const VectorX<Scalar>& a, const VectorX<Scalar>& b, Scalar weight) {
    return weight * inner(a, b);
}

template <class Scalar>
Scalar weighted_norm(const VectorX<Scalar>& a, Scalar weight) {
    return std::sqrt(weight) * a.norm();
}

} // namespace eqp
