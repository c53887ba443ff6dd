#include "eqp/sets.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace eqp;
using Vec = VectorX<double>;

namespace {
Vec make(std::initializer_list<double> v) {
    Vec out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}
} // namespace

TEST_CASE("box projection clamps componentwise") {
    const Box<double> b = Box<double>::cube(2, -1.0, 1.0);
    CHECK(project(b, make({2, 0.5})).isApprox(make({1, 0.5})));
    const Vec inside = make({0.3, -0.7});
    CHECK(project(b, inside) == inside);
    CHECK_THROWS_AS(project(b, make({1, 2, 3})), DimensionError);
    CHECK_THROWS_AS(Box<double>(make({1, 0}), make({0, 1})), std::invalid_argument);
}

TEST_CASE("box projection matches per-coordinate brute force") {
    const Index m = 50;
    const Box<double> b = Box<double>::cube(m, -10.0, 10.0);
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        const Vec p = rng.uniform_vector(m, -20.0, 20.0);
        const Vec proj = project(b, p);
        for (Index i = 0; i < m; ++i) {
            const double ref = oracles::closest_on_grid_1d(p[i], -10.0, 10.0, 200000);
            CHECK(std::abs(proj[i] - ref) <= 1e-4); // grid spacing 1e-4
        }
    }
}

TEST_CASE("ball projection") {
    const Ball<double> b(Vec::Zero(2), 2.0);
    CHECK(project(b, make({4, 0})).isApprox(make({2, 0})));
    const Vec interior = make({0.5, -0.5});
    CHECK(project(b, interior) == interior);
    const Vec boundary = make({2, 0});
    CHECK(project(b, boundary) == boundary);
    CHECK_THROWS_AS(Ball<double>(Vec::Zero(2), 0.0), std::invalid_argument);
}

TEST_CASE("halfspace projection") {
    const Halfspace<double> h(make({1, 0}), make({0, 0}));
    CHECK(project(h, make({2, 3})).isApprox(make({0, 3})));
    const Vec feasible = make({-1, 5});
    CHECK(project(h, feasible) == feasible);
    const Halfspace<double> whole(Vec::Zero(2), Vec::Zero(2));
    CHECK(project(whole, make({7, -9})) == make({7, -9}));
}

TEST_CASE("normal cone membership, box") {
    const Box<double> b = Box<double>::cube(2, -1.0, 1.0);
    CHECK(in_normal_cone(b, make({1, 0}), make({3, 0}), 1e-9));
    CHECK(in_normal_cone(b, make({0.2, -0.4}), Vec::Zero(2).eval(), 1e-9));
    CHECK_FALSE(in_normal_cone(b, make({0, 0}), make({1, 0}), 1e-9));
    CHECK_FALSE(in_normal_cone(b, make({1, 0}), make({-1, 0}), 1e-9));
    CHECK(in_normal_cone(b, make({-1, 1}), make({-2, 5}), 1e-9));
    CHECK_THROWS_AS(in_normal_cone(b, make({2, 0}), make({1, 0}), 1e-9),
                    std::invalid_argument);
}

TEST_CASE("normal cone membership, ball") {
    const Ball<double> b(Vec::Zero(2), 1.0);
    CHECK(in_normal_cone(b, make({1, 0}), make({0.5, 0}), 1e-9));
    CHECK(in_normal_cone(b, make({1, 0}), Vec::Zero(2).eval(), 1e-9));
    CHECK_FALSE(in_normal_cone(b, make({1, 0}), make({0, 1}), 1e-9));
    CHECK_FALSE(in_normal_cone(b, make({0.2, 0}), make({0.1, 0}), 1e-9));
    CHECK_THROWS_AS(in_normal_cone(b, make({3, 0}), make({1, 0}), 1e-9),
                    std::invalid_argument);
}

TEST_CASE("normal cone membership, halfspace") {
    const Halfspace<double> h(make({0, 2}), make({1, 1}));
    CHECK(in_normal_cone(h, make({0, 1}), make({0, 1}), 1e-9));   // boundary, outward
    CHECK_FALSE(in_normal_cone(h, make({0, 1}), make({0, -1}), 1e-9));
    CHECK(in_normal_cone(h, make({0, 0}), Vec::Zero(2).eval(), 1e-9)); // interior
    CHECK_FALSE(in_normal_cone(h, make({0, 0}), make({0, 0.1}), 1e-9));
}

TEST_CASE("projection idempotence across set kinds") {
    Rng rng(17);
    const FeasibleSet<double> sets[] = {
        FeasibleSet<double>(Box<double>::cube(6, -2.0, 3.0)),
        FeasibleSet<double>(Ball<double>(rng.uniform_vector(6, -1.0, 1.0), 1.5)),
        FeasibleSet<double>(
            Halfspace<double>(rng.uniform_vector(6, -1.0, 1.0), Vec::Zero(6))),
    };
    for (const auto& s : sets) {
        for (int k = 0; k < 100; ++k) {
            const Vec p = rng.uniform_vector(6, -6.0, 6.0);
            const Vec once = project(s, p);
            const Vec twice = project(s, once);
            CHECK((twice - once).norm() <= 1e-12);
        }
    }
}

TEST_CASE("firm nonexpansiveness") {
    Rng rng(23);
    const FeasibleSet<double> sets[] = {
        FeasibleSet<double>(Box<double>::cube(5, -1.0, 2.0)),
        FeasibleSet<double>(Ball<double>(Vec::Zero(5), 2.0)),
        FeasibleSet<double>(
            Halfspace<double>(rng.uniform_vector(5, -1.0, 1.0), rng.uniform_vector(5, -1.0, 1.0))),
    };
    for (const auto& s : sets) {
        for (int k = 0; k < 100; ++k) {
            const Vec p = rng.uniform_vector(5, -5.0, 5.0);
            const Vec q = rng.uniform_vector(5, -5.0, 5.0);
            const Vec pp = project(s, p);
            const Vec pq = project(s, q);
            CHECK((pp - pq).squaredNorm() <= (pp - pq).dot(p - q) + 1e-10);
        }
    }
}

TEST_CASE("variational characterization of the projection") {
    Rng rng(31);
    const FeasibleSet<double> sets[] = {
        FeasibleSet<double>(Box<double>::cube(4, -1.0, 1.0)),
        FeasibleSet<double>(Ball<double>(Vec::Zero(4), 1.0)),
        FeasibleSet<double>(
            Halfspace<double>(rng.uniform_vector(4, -1.0, 1.0), Vec::Zero(4))),
    };
    for (const auto& s : sets) {
        const Vec p = rng.uniform_vector(4, -4.0, 4.0);
        const Vec pp = project(s, p);
        for (int k = 0; k < 100; ++k) {
            const Vec y = sample_uniform(s, rng);
            CHECK((p - pp).dot(y - pp) <= 1e-10);
        }
    }
}

TEST_CASE("projection residual lies in the normal cone") {
    Rng rng(37);
    const FeasibleSet<double> sets[] = {
        FeasibleSet<double>(Box<double>::cube(4, -1.0, 1.0)),
        FeasibleSet<double>(Ball<double>(Vec::Zero(4), 1.0)),
        FeasibleSet<double>(
            Halfspace<double>(rng.uniform_vector(4, -1.0, 1.0), Vec::Zero(4))),
    };
    for (const auto& s : sets) {
        for (int k = 0; k < 50; ++k) {
            const Vec p = rng.uniform_vector(4, -4.0, 4.0);
            const Vec pp = project(s, p);
            CHECK(in_normal_cone(s, pp, (p - pp).eval(), 1e-9));
        }
    }
}

TEST_CASE("samples land in the set") {
    Rng rng(41);
    const FeasibleSet<double> box(Box<double>::cube(2, -1.0, 1.0));
    const FeasibleSet<double> ball(Ball<double>(Vec::Zero(3), 0.5));
    for (int k = 0; k < 200; ++k) {
        CHECK(contains(box, sample_uniform(box, rng)));
        CHECK(contains(ball, sample_uniform(ball, rng)));
    }
}
