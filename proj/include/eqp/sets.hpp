#pragma once

#include "eqp/hilbert.hpp"
#include "eqp/rng.hpp"
#include "eqp/types.hpp"

#include <cmath>
#include <variant>

namespace eqp {

/// Axis-aligned box { x : lower <= x <= upper } (componentwise).
template <class Scalar>
struct Box {
    VectorX<Scalar> lower, upper;

    Box(VectorX<Scalar> lo, VectorX<Scalar> hi) : lower(std::move(lo)), upper(std::move(hi)) {
        check_same_dim(lower.size(), upper.size(), "Box");
        require_finite(lower, "Box.lower");
        require_finite(upper, "Box.upper");
        if ((lower.array() > upper.array()).any()) {
            throw std::invalid_argument("Box: lower > upper in some coordinate");
        }
    }

    static Box cube(Index n, Scalar lo, Scalar hi) {
        return Box(VectorX<Scalar>::Constant(n, lo), VectorX<Scalar>::Constant(n, hi));
    }

    Index dim() const { return lower.size(); }
};

/// Euclidean ball { x : |x - center| <= radius }.
template <class Scalar>
struct Ball {
    VectorX<Scalar> center;
    Scalar radius;

    Ball(VectorX<Scalar> c, Scalar r) : center(std::move(c)), radius(r) {
        require_finite(center, "Ball.center");
        if (!(radius > Scalar(0))) throw std::invalid_argument("Ball: radius must be positive");
    }

    Index dim() const { return center.size(); }
};

/// { x : <normal, x - anchor> <= 0 }. A zero normal denotes the whole
/// space, the correct degenerate limit when the separating vector
/// w - lambda*v - z vanishes at a solution.
template <class Scalar>
struct Halfspace {
    VectorX<Scalar> normal, anchor;

    Halfspace(VectorX<Scalar> a, VectorX<Scalar> z) : normal(std::move(a)), anchor(std::move(z)) {
        check_same_dim(normal.size(), anchor.size(), "Halfspace");
        require_finite(normal, "Halfspace.normal");
        require_finite(anchor, "Halfspace.anchor");
    }

    Index dim() const { return normal.size(); }
    bool whole_space() const { return normal.isZero(Scalar(0)); }
};

template <class Scalar>
using FeasibleSet = std::variant<Box<Scalar>, Ball<Scalar>, Halfspace<Scalar>>;

template <class Scalar>
Index dim(const FeasibleSet<Scalar>& set) {
    return std::visit([](const auto& s) { return s.dim(); }, set);
}

// ---- metric projections ------------------------------------------------

template <class Scalar>
VectorX<Scalar> project(const Box<Scalar>& b, const VectorX<Scalar>& p) {
    check_same_dim(b.dim(), p.size(), "project(Box)");
    return p.cwiseMax(b.lower).cwiseMin(b.upper);
}

template <class Scalar>
VectorX<Scalar> project(const Ball<Scalar>& b, const VectorX<Scalar>& p) {
    check_same_dim(b.dim(), p.size(), "project(Ball)");
    VectorX<Scalar> d = p - b.center;
    const Scalar n = d.norm();
    if (n <= b.radius) return p;
    return b.center + (b.radius / n) * d;
}

template <class Scalar>
VectorX<Scalar> project(const Halfspace<Scalar>& h, const VectorX<Scalar>& p) {
    check_same_dim(h.dim(), p.size(), "project(Halfspace)");
    const Scalar a2 = h.normal.squaredNorm();
    if (a2 == Scalar(0)) return p;
    const Scalar s = h.normal.dot(p - h.anchor);
    if (s <= Scalar(0)) return p;
    return p - (s / a2) * h.normal;
}

template <class Scalar>
VectorX<Scalar> project(const FeasibleSet<Scalar>& set, const VectorX<Scalar>& p) {
    return std::visit([&](const auto& s) { return project(s, p); }, set);
}

// ---- membership --------------------------------------------------------

template <class Scalar>
bool contains(const Box<Scalar>& b, const VectorX<Scalar>& p, Scalar tol = Scalar(1e-9)) {
    check_same_dim(b.dim(), p.size(), "contains(Box)");
    return (p.array() >= b.lower.array() - tol).all() &&
           (p.array() <= b.upper.array() + tol).all();
}

template <class Scalar>
bool contains(const Ball<Scalar>& b, const VectorX<Scalar>& p, Scalar tol = Scalar(1e-9)) {
    check_same_dim(b.dim(), p.size(), "contains(Ball)");
    return (p - b.center).norm() <= b.radius + tol;
}

template <class Scalar>
bool contains(const Halfspace<Scalar>& h, const VectorX<Scalar>& p, Scalar tol = Scalar(1e-9)) {
    check_same_dim(h.dim(), p.size(), "contains(Halfspace)");
    if (h.whole_space()) return true;
    return h.normal.dot(p - h.anchor) <= tol * (Scalar(1) + h.normal.norm());
}

template <class Scalar>
bool contains(const FeasibleSet<Scalar>& set, const VectorX<Scalar>& p, Scalar tol = Scalar(1e-9)) {
    return std::visit([&](const auto& s) { return contains(s, p, tol); }, set);
}

// ---- normal-cone membership ---------------------------------------------
// Absolute tolerances throughout; iterates carry O(1) magnitudes in all
// supported problem families.

template <class Scalar>
bool in_normal_cone(const Box<Scalar>& b, const VectorX<Scalar>& point,
                    const VectorX<Scalar>& direction, Scalar tol = Scalar(1e-9)) {
    check_same_dim(b.dim(), point.size(), "in_normal_cone(Box)");
    check_same_dim(b.dim(), direction.size(), "in_normal_cone(Box)");
    if (!contains(b, point, tol)) {
        throw std::invalid_argument("in_normal_cone: point not in set");
    }
    for (Index i = 0; i < b.dim(); ++i) {
        const bool at_upper = point[i] >= b.upper[i] - tol;
        const bool at_lower = point[i] <= b.lower[i] + tol;
        if (at_upper && at_lower) continue;          // pinched coordinate, any sign
        if (at_upper) {
            if (direction[i] < -tol) return false;    // must point outward (up)
        } else if (at_lower) {
            if (direction[i] > tol) return false;     // must point outward (down)
        } else if (std::abs(direction[i]) > tol) {
            return false;                             // interior: only zero
        }
    }
    return true;
}

template <class Scalar>
bool in_normal_cone(const Ball<Scalar>& b, const VectorX<Scalar>& point,
                    const VectorX<Scalar>& direction, Scalar tol = Scalar(1e-9)) {
    check_same_dim(b.dim(), point.size(), "in_normal_cone(Ball)");
    check_same_dim(b.dim(), direction.size(), "in_normal_cone(Ball)");
    VectorX<Scalar> d = point - b.center;
    const Scalar dist = d.norm();
    if (dist > b.radius + tol) {
        throw std::invalid_argument("in_normal_cone: point not in set");
    }
    if (dist < b.radius - tol) {
        return direction.norm() <= tol;               // interior: only zero
    }
    // boundary: nonnegative multiple of the outward radial direction
    d /= dist;
    const Scalar along = direction.dot(d);
    if (along < -tol) return false;
    return (direction - along * d).norm() <= tol;
}

template <class Scalar>
bool in_normal_cone(const Halfspace<Scalar>& h, const VectorX<Scalar>& point,
                    const VectorX<Scalar>& direction, Scalar tol = Scalar(1e-9)) {
    check_same_dim(h.dim(), point.size(), "in_normal_cone(Halfspace)");
    check_same_dim(h.dim(), direction.size(), "in_normal_cone(Halfspace)");
    if (h.whole_space()) return direction.norm() <= tol;
    const Scalar an = h.normal.norm();
    const Scalar s = h.normal.dot(point - h.anchor) / an;
    if (s > tol) throw std::invalid_argument("in_normal_cone: point not in set");
    if (s < -tol) return direction.norm() <= tol;     // interior
    VectorX<Scalar> u = h.normal / an;
    const Scalar along = direction.dot(u);
    if (along < -tol) return false;
    return (direction - along * u).norm() <= tol;
}

template <class Scalar>
bool in_normal_cone(const FeasibleSet<Scalar>& set, const VectorX<Scalar>& point,
                    const VectorX<Scalar>& direction, Scalar tol = Scalar(1e-9)) {
    return std::visit([&](const auto& s) { return in_normal_cone(s, point, direction, tol); }, set);
}

// ---- uniform sampling ----------------------------------------------------

template <class Scalar>
VectorX<Scalar> sample_uniform(const Box<Scalar>& b, Rng& rng) {
    VectorX<Scalar> v(b.dim());
    for (Index i = 0; i < b.dim(); ++i) {
        v[i] = static_cast<Scalar>(rng.uniform(static_cast<double>(b.lower[i]),
                                               static_cast<double>(b.upper[i])));
    }
    return v;
}

template <class Scalar>
VectorX<Scalar> sample_uniform(const Ball<Scalar>& b, Rng& rng) {
    const Index n = b.dim();
    VectorX<Scalar> v(n);
    for (Index i = 0; i < n; ++i) v[i] = static_cast<Scalar>(rng.normal());
    Scalar nn = v.norm();
    if (nn == Scalar(0)) nn = Scalar(1);
    const Scalar r = b.radius *
        static_cast<Scalar>(std::pow(rng.uniform(), 1.0 / static_cast<double>(n)));
    return b.center + (r / nn) * v;
}

template <class Scalar>
VectorX<Scalar> sample_uniform(const Halfspace<Scalar>& h, Rng& rng) {
    // No uniform measure exists; return a Gaussian point pushed into the set.
    VectorX<Scalar> v(h.dim());
    for (Index i = 0; i < h.dim(); ++i) v[i] = static_cast<Scalar>(rng.normal());
    return project(h, (h.anchor + v).eval());
}

template <class Scalar>
VectorX<Scalar> sample_uniform(const FeasibleSet<Scalar>& set, Rng& rng) {
    return std::visit([&](const auto& s) { return sample_uniform(s, rng); }, set);
}

} // namespace eqp
