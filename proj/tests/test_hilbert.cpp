#include "eqp/hilbert.hpp"
#include "eqp/rng.hpp"

#include <doctest.h>

#include <array>
#include <vector>

using eqp::VectorX;
using Vec = VectorX<double>;

namespace {
Vec make(std::initializer_list<double> v) {
    Vec out(static_cast<eqp::Index>(v.size()));
    eqp::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}
} // namespace

TEST_CASE("inner product") {
    CHECK(eqp::inner(make({1, 2}), make({3, 4})) == doctest::Approx(11.0).epsilon(1e-15));
    CHECK(eqp::inner(make({1, 2, 3}), Vec::Zero(3).eval()) == 0.0);
    CHECK(eqp::inner(make({1, 0}), make({0, 1})) == 0.0);
    CHECK_THROWS_AS(eqp::inner(make({1, 2}), make({1, 2, 3})), eqp::DimensionError);
}

TEST_CASE("norm") {
    CHECK(eqp::norm(make({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(eqp::norm(Vec::Zero(7).eval()) == 0.0);
    CHECK(eqp::norm(make({1})) == 1.0);
}

TEST_CASE("axpy_combine") {
    const std::array<double, 2> coeffs{1.0, -1.0};
    const std::vector<Vec> vecs{make({2, 2}), make({1, 1})};
    const Vec combo = eqp::axpy_combine<double>(coeffs, vecs);
    CHECK(combo.isApprox(make({1, 1})));

    const std::array<double, 1> one{1.0};
    const std::vector<Vec> single{make({4, -2, 7})};
    CHECK(eqp::axpy_combine<double>(one, single) == single[0]);

    const std::array<double, 2> zeros{0.0, 0.0};
    CHECK(eqp::axpy_combine<double>(zeros, vecs).isZero(0.0));

    const std::vector<Vec> mismatched{make({1, 2}), make({1, 2, 3})};
    CHECK_THROWS_AS(eqp::axpy_combine<double>(coeffs, mismatched), eqp::DimensionError);
    const std::array<double, 1> short_coeffs{1.0};
    CHECK_THROWS_AS(eqp::axpy_combine<double>(short_coeffs, vecs), eqp::DimensionError);
}

TEST_CASE("Cauchy-Schwarz on random vectors") {
    eqp::Rng rng(42);
    for (int k = 0; k < 200; ++k) {
        const Vec a = rng.uniform_vector(17, -5.0, 5.0);
        const Vec b = rng.uniform_vector(17, -5.0, 5.0);
        const double lhs = std::abs(eqp::inner(a, b));
        const double rhs = eqp::norm(a) * eqp::norm(b);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
}

TEST_CASE("polarization identity 2<s,z> = |s|^2 + |z|^2 - |s-z|^2") {
    eqp::Rng rng(7);
    for (int k = 0; k < 200; ++k) {
        const Vec s = rng.uniform_vector(11, -3.0, 3.0);
        const Vec z = rng.uniform_vector(11, -3.0, 3.0);
        const double lhs = 2.0 * eqp::inner(s, z);
        const double rhs = s.squaredNorm() + z.squaredNorm() - (s - z).squaredNorm();
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
        CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
}

TEST_CASE("affine-combination identity") {
    // For weights summing to one: |t*s + (1-t)*z|^2 =
    // t|s|^2 + (1-t)|z|^2 - t(1-t)|s-z|^2, for every real t. Checked in the
    // convex range and in the extrapolated form |(1+t)s - tz|^2 used by the
    // correction-term analysis.
    eqp::Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        const Vec s = rng.uniform_vector(9, -2.0, 2.0);
        const Vec z = rng.uniform_vector(9, -2.0, 2.0);
        const double b = rng.uniform();
        {
            const double lhs = ((1 - b) * s + b * z).squaredNorm();
            const double rhs = (1 - b) * s.squaredNorm() + b * z.squaredNorm() -
                               b * (1 - b) * (s - z).squaredNorm();
            const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
            CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
        }
        {
            const double t = 3.0 * rng.uniform();
            const double lhs = ((1 + t) * s - t * z).squaredNorm();
            const double rhs = (1 + t) * s.squaredNorm() - t * z.squaredNorm() +
                               t * (1 + t) * (s - z).squaredNorm();
            const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
            CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("weighted variants scale the Euclidean ones") {
    const Vec a = make({1, 2, 3});
    const Vec b = make({4, 5, 6});
    CHECK(eqp::weighted_inner(a, b, 0.5) == doctest::Approx(0.5 * eqp::inner(a, b)));
    CHECK(eqp::weighted_norm(a, 0.25) == doctest::Approx(0.5 * eqp::norm(a)));
}

TEST_CASE("finite checks reject NaN") {
    Vec v = make({1, 2});
    v[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eqp::require_finite(v, "test"), std::invalid_argument);
}

TEST_CASE("float instantiation compiles and agrees") {
    VectorX<float> a(2), b(2);
    a << 1.f, 2.f;
    b << 3.f, 4.f;
    CHECK(eqp::inner(a, b) == doctest::Approx(11.f));
}
