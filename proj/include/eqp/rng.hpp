#pragma once

#include "eqp/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace eqp {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded 64-bit generator with platform-independent uniform draws.
/// Child streams are derived from the base seed via splitmix64 so the
/// same (seed, tag) always yields the same stream regardless of how much
/// the parent has been consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [lo, hi) built from the top 53 bits; avoids the
    /// implementation-defined std::uniform_real_distribution.
    double uniform(double lo = 0.0, double hi = 1.0) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    /// Standard normal via Box-Muller (deterministic across platforms).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Rng child(std::uint64_t tag) const {
        std::uint64_t s = seed_ ^ (0x6a09e667f3bcc909ULL + tag * 0x9e3779b97f4a7c15ULL);
        splitmix64(s);
        return Rng(splitmix64(s));
    }

    template <class Scalar = double>
    VectorX<Scalar> uniform_vector(Index n, double lo, double hi) {
        VectorX<Scalar> v(n);
        for (Index i = 0; i < n; ++i) v[i] = static_cast<Scalar>(uniform(lo, hi));
        return v;
    }

    /// Entries drawn row by row.
    template <class Scalar = double>
    MatrixX<Scalar> uniform_matrix(Index rows, Index cols, double lo, double hi) {
        MatrixX<Scalar> m(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) m(i, j) = static_cast<Scalar>(uniform(lo, hi));
        return m;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace eqp
