#pragma once

#include "eqp/bifunctions.hpp"
#include "eqp/rng.hpp"
#include "eqp/sets.hpp"
#include "eqp/solver.hpp"
#include "eqp/spectral.hpp"
#include "eqp/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace eqp {

enum class VolterraCase { I, II, III, IV };

inline const char* to_string(VolterraCase c) {
    switch (c) {
        case VolterraCase::I: return "I";
        case VolterraCase::II: return "II";
        case VolterraCase::III: return "III";
        case VolterraCase::IV: return "IV";
    }
    return "?";
}

inline VolterraCase volterra_case_from(const std::string& s) {
    if (s == "I" || s == "1") return VolterraCase::I;
    if (s == "II" || s == "2") return VolterraCase::II;
    if (s == "III" || s == "3") return VolterraCase::III;
    if (s == "IV" || s == "4") return VolterraCase::IV;
    throw std::invalid_argument("unknown case '" + s + "' (expected I..IV)");
}

/// A ready-to-solve benchmark instance: bifunction, feasible set, the four
/// starting points, and (when known) a reference solution.
template <class Scalar>
struct ProblemInstance {
    std::string name;
    std::string family; // nash_cournot | skew | volterra | strongly_pseudomonotone
    AnyBifunction<Scalar> f;
    FeasibleSet<Scalar> C;
    InitialPoints<Scalar> start;
    std::optional<VectorX<Scalar>> known_solution;
    std::uint64_t rng_seed = 0;
    std::optional<VolterraCase> volterra_case;
    std::optional<Scalar> beta; // strong pseudomonotonicity modulus, when built in

    Index dim() const { return eqp::dim(C); }
};

namespace detail {

template <class Scalar>
MatrixX<Scalar> symmetrized_gram(const MatrixX<Scalar>& A) {
    MatrixX<Scalar> G = A.transpose() * A;
    return ((G + G.transpose()) / Scalar(2)).eval();
}

} // namespace detail

/// Random Nash-Cournot-type instance: f(x,y) = <P x + Q y + r, y - x> on
/// [-10, 10]^m with Q = Aq'Aq and P = Q + Ap'Ap, which makes P, Q and P - Q
/// positive semidefinite by construction. Draw order from the seeded
/// generator: Ap entries (row by row), then Aq, then r.
template <class Scalar = double>
ProblemInstance<Scalar> gen_nash_cournot(Index m, std::uint64_t rng_seed) {
    if (m < 2) throw std::invalid_argument("gen_nash_cournot: m must be at least 2");
    Rng rng(rng_seed);
    const MatrixX<Scalar> Ap = rng.uniform_matrix<Scalar>(m, m, -1.0, 1.0);
    const MatrixX<Scalar> Aq = rng.uniform_matrix<Scalar>(m, m, -1.0, 1.0);
    const VectorX<Scalar> r = rng.uniform_vector<Scalar>(m, -1.0, 1.0);

    const MatrixX<Scalar> Q = detail::symmetrized_gram(Aq);
    const MatrixX<Scalar> P = Q + detail::symmetrized_gram(Ap);
    QuadraticBifunction<Scalar> f(P, Q, r);
    f.lipschitz = lipschitz_constants(f);

    VectorX<Scalar> y_m1(m), w_m2(m);
    for (Index i = 1; i <= m; ++i) {
        y_m1[i - 1] = Scalar(i) / Scalar(10 * i + 1);
        w_m2[i - 1] = Scalar(i + 5) / Scalar(i * i + 1);
    }

    ProblemInstance<Scalar> inst{
        "nash_cournot_m" + std::to_string(m) + "_seed" + std::to_string(rng_seed),
        "nash_cournot",
        AnyBifunction<Scalar>(std::move(f)),
        FeasibleSet<Scalar>(Box<Scalar>::cube(m, Scalar(-10), Scalar(10))),
        InitialPoints<Scalar>{y_m1, y_m1, w_m2, w_m2},
        std::nullopt,
        rng_seed,
        std::nullopt,
        std::nullopt};
    return inst;
}

/// Anti-diagonal sign matrix on [-1, 1]^m:
/// a_ij = -1 if j = m+1-i and j > i, +1 if j = m+1-i and j < i, else 0.
/// A' = -A, so f(x,y) = <Ax, y-x> is monotone and x* = 0 solves the problem.
template <class Scalar = double>
ProblemInstance<Scalar> gen_skew(Index m, std::uint64_t rng_seed) {
    if (m < 2) throw std::invalid_argument("gen_skew: m must be at least 2");
    MatrixX<Scalar> A = MatrixX<Scalar>::Zero(m, m);
    for (Index i = 1; i <= m; ++i) {
        const Index j = m + 1 - i;
        if (j > i) A(i - 1, j - 1) = Scalar(-1);
        else if (j < i) A(i - 1, j - 1) = Scalar(1);
    }
    LinearOpBifunction<Scalar> f(A);
    const Scalar an = spectral_norm<Scalar>(A);
    f.lipschitz = std::make_pair(an / Scalar(2), an / Scalar(2));

    const Box<Scalar> cube = Box<Scalar>::cube(m, Scalar(-1), Scalar(1));
    Rng rng(rng_seed);
    VectorX<Scalar> y0 = sample_uniform(cube, rng);
    VectorX<Scalar> y_m1 = sample_uniform(cube, rng);
    VectorX<Scalar> w_m1 = sample_uniform(cube, rng);

    ProblemInstance<Scalar> inst{
        "skew_m" + std::to_string(m) + "_seed" + std::to_string(rng_seed),
        "skew",
        AnyBifunction<Scalar>(std::move(f)),
        FeasibleSet<Scalar>(cube),
        InitialPoints<Scalar>{y0, y_m1, w_m1, w_m1},
        VectorX<Scalar>::Zero(m),
        rng_seed,
        std::nullopt,
        std::nullopt};
    return inst;
}

/// Discretized integral-operator instance on the radius-2 ball of grid
/// functions over [0,1]: apply(x) = e^{-|x|} * (running sum of x) / (n-1),
/// i.e. the lower-triangular cumulative-sum matrix V scaled by the grid
/// spacing, with the e^{-|x|} factor evaluated at the frozen first argument.
/// f(x, .) stays affine, so the closed-form prox path applies.
template <class Scalar = double>
ProblemInstance<Scalar> gen_volterra(Index n_grid, VolterraCase which) {
    if (n_grid < 10) throw std::invalid_argument("gen_volterra: n_grid must be at least 10");
    const Scalar h = Scalar(1) / Scalar(n_grid - 1);

    auto apply = [h, n_grid](const VectorX<Scalar>& x) {
        VectorX<Scalar> out(n_grid);
        Scalar acc = Scalar(0);
        for (Index k = 0; k < n_grid; ++k) {
            acc += x[k];
            out[k] = h * acc;
        }
        return (std::exp(-x.norm()) * out).eval();
    };
    LinearOpBifunction<Scalar> f(n_grid, apply);
    {
        // |A(x) - A(w)| <= 3 |V|_2 |x - w| on the radius-2 ball
        MatrixX<Scalar> V = MatrixX<Scalar>::Zero(n_grid, n_grid);
        for (Index i = 0; i < n_grid; ++i) V.row(i).head(i + 1).setConstant(h);
        const Scalar k = Scalar(1.5) * spectral_norm<Scalar>(V);
        f.lipschitz = std::make_pair(k, k);
    }

    VectorX<Scalar> t(n_grid);
    for (Index k = 0; k < n_grid; ++k) t[k] = Scalar(k) * h;
    VectorX<Scalar> y_m1(n_grid);
    switch (which) {
        case VolterraCase::I:
            y_m1 = (Scalar(1) - Scalar(0.5) * t.array() + (t.array() - Scalar(0.5)).abs()).matrix();
            break;
        case VolterraCase::II: y_m1 = (t.array().square() + Scalar(1)).matrix(); break;
        case VolterraCase::III:
            y_m1 = (t.array().exp() + Scalar(2) * t.array() - Scalar(1)).matrix();
            break;
        case VolterraCase::IV:
            y_m1 = ((Scalar(2) * t.array() + Scalar(1)).sin() + Scalar(5)).matrix();
            break;
    }
    const VectorX<Scalar> w_m2 = (Scalar(2) * (t.array() + Scalar(1)).sin()).matrix();

    ProblemInstance<Scalar> inst{
        std::string("volterra_case") + to_string(which) + "_n" + std::to_string(n_grid),
        "volterra",
        AnyBifunction<Scalar>(std::move(f)),
        FeasibleSet<Scalar>(Ball<Scalar>(VectorX<Scalar>::Zero(n_grid), Scalar(2))),
        InitialPoints<Scalar>{y_m1, y_m1, w_m2, w_m2},
        VectorX<Scalar>::Zero(n_grid),
        0,
        which,
        std::nullopt};
    return inst;
}

/// beta-strongly pseudomonotone rate-test instance:
/// f(x,y) = <M x + r, y - x> with M = beta*I + S'S/|S'S|_2 on [-5, 5]^m,
/// realized as the quadratic family with Q = 0 (P - Q = M is PD).
/// Draw order: S entries, then r, then the four starting points.
template <class Scalar = double>
ProblemInstance<Scalar> gen_strongly_pseudomonotone(Index m, Scalar beta,
                                                    std::uint64_t rng_seed) {
    if (m < 2) throw std::invalid_argument("gen_strongly_pseudomonotone: m must be at least 2");
    if (!(beta > Scalar(0))) {
        throw std::invalid_argument("gen_strongly_pseudomonotone: beta must be positive");
    }
    Rng rng(rng_seed);
    const MatrixX<Scalar> S = rng.uniform_matrix<Scalar>(m, m, -1.0, 1.0);
    const MatrixX<Scalar> G = detail::symmetrized_gram(S);
    const Scalar gn = spectral_norm<Scalar>(G);
    MatrixX<Scalar> M = MatrixX<Scalar>::Identity(m, m) * beta;
    if (gn > Scalar(0)) M += G / gn;
    const VectorX<Scalar> r = rng.uniform_vector<Scalar>(m, -1.0, 1.0);

    QuadraticBifunction<Scalar> f(M, MatrixX<Scalar>::Zero(m, m), r);
    f.lipschitz = lipschitz_constants(f);

    const Box<Scalar> box = Box<Scalar>::cube(m, Scalar(-5), Scalar(5));
    VectorX<Scalar> y0 = sample_uniform(box, rng);
    VectorX<Scalar> w_m1 = sample_uniform(box, rng);

    // The unconstrained stationary point solves the problem when it lies in
    // the box (M is positive definite, so the solution is unique).
    std::optional<VectorX<Scalar>> solution;
    const VectorX<Scalar> xstar = Eigen::LLT<MatrixX<Scalar>>(M).solve((-r).eval());
    if ((xstar.array().abs() <= Scalar(5)).all()) solution = xstar;

    ProblemInstance<Scalar> inst{
        "strongly_pm_m" + std::to_string(m) + "_seed" + std::to_string(rng_seed),
        "strongly_pseudomonotone",
        AnyBifunction<Scalar>(std::move(f)),
        FeasibleSet<Scalar>(box),
        InitialPoints<Scalar>{y0, y0, w_m1, w_m1},
        solution,
        rng_seed,
        std::nullopt,
        beta};
    return inst;
}

// ---- serialization -------------------------------------------------------
// Line-oriented text format, floats at 17 significant digits. Random
// families store their realized matrices; deterministic families (skew,
// volterra) store only the structural parameters and are rebuilt on load.

namespace detail {

inline void write_scalar(std::ostream& os, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

inline void write_vector(std::ostream& os, const char* key, const Eigen::VectorXd& v) {
    os << key;
    for (Index i = 0; i < v.size(); ++i) {
        os << ' ';
        write_scalar(os, v[i]);
    }
    os << '\n';
}

inline void write_matrix(std::ostream& os, const char* key, const Eigen::MatrixXd& m) {
    os << key << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            write_scalar(os, m(i, j));
        }
        os << '\n';
    }
}

inline Eigen::VectorXd parse_vector(const std::string& line, const std::string& key) {
    std::istringstream iss(line);
    std::string k;
    iss >> k;
    if (k != key) throw std::runtime_error("instance file: expected '" + key + "', got '" + k + "'");
    std::vector<double> vals;
    double v;
    while (iss >> v) vals.push_back(v);
    return Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Index>(vals.size()));
}

inline std::string expect_line(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) {
        throw std::runtime_error(std::string("instance file: unexpected end before ") + what);
    }
    return line;
}

inline Eigen::MatrixXd parse_matrix(std::istream& is, const std::string& header,
                                    const std::string& key) {
    std::istringstream iss(header);
    std::string k;
    Index rows = 0, cols = 0;
    iss >> k >> rows >> cols;
    if (k != key) throw std::runtime_error("instance file: expected '" + key + "'");
    Eigen::MatrixXd m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        std::istringstream row(expect_line(is, "matrix row"));
        for (Index j = 0; j < cols; ++j) {
            if (!(row >> m(i, j))) throw std::runtime_error("instance file: short matrix row");
        }
    }
    return m;
}

} // namespace detail

inline void save_instance(std::ostream& os, const ProblemInstance<double>& inst) {
    os << "eqp-instance 1\n";
    os << "name " << inst.name << '\n';
    os << "family " << inst.family << '\n';
    os << "rng_seed " << inst.rng_seed << '\n';
    os << "dim " << inst.dim() << '\n';
    if (inst.beta) {
        os << "beta ";
        detail::write_scalar(os, *inst.beta);
        os << '\n';
    }
    if (inst.volterra_case) os << "case " << to_string(*inst.volterra_case) << '\n';

    if (const auto* box = std::get_if<Box<double>>(&inst.C)) {
        os << "set box\n";
        detail::write_vector(os, "lower", box->lower);
        detail::write_vector(os, "upper", box->upper);
    } else if (const auto* ball = std::get_if<Ball<double>>(&inst.C)) {
        os << "set ball\n";
        detail::write_vector(os, "center", ball->center);
        os << "radius ";
        detail::write_scalar(os, ball->radius);
        os << '\n';
    } else {
        throw std::invalid_argument("save_instance: unsupported feasible-set kind");
    }

    if (inst.family == "skew" || inst.family == "volterra") {
        os << "bifunction structural\n"; // rebuilt from family + dim (+ case)
    } else if (const auto* q = std::get_if<QuadraticBifunction<double>>(&inst.f)) {
        os << "bifunction quadratic\n";
        detail::write_matrix(os, "P", q->P());
        detail::write_matrix(os, "Q", q->Q());
        detail::write_vector(os, "r", q->r());
    } else if (const auto* l = std::get_if<LinearOpBifunction<double>>(&inst.f)) {
        if (!l->matrix()) {
            throw std::invalid_argument("save_instance: black-box operator without family tag");
        }
        os << "bifunction linear\n";
        detail::write_matrix(os, "A", *l->matrix());
    }
    if (auto lip = lipschitz_metadata(inst.f)) {
        os << "lipschitz ";
        detail::write_scalar(os, lip->first);
        os << ' ';
        detail::write_scalar(os, lip->second);
        os << '\n';
    }
    detail::write_vector(os, "y0", inst.start.y0);
    detail::write_vector(os, "y_m1", inst.start.y_m1);
    detail::write_vector(os, "w_m1", inst.start.w_m1);
    detail::write_vector(os, "w_m2", inst.start.w_m2);
    if (inst.known_solution) detail::write_vector(os, "known_solution", *inst.known_solution);
    os << "end\n";
}

inline ProblemInstance<double> load_instance(std::istream& is) {
    using detail::expect_line;
    std::string line = expect_line(is, "header");
    if (line != "eqp-instance 1") throw std::runtime_error("instance file: bad header");

    std::string name, family, set_kind, bifunction_kind;
    std::uint64_t rng_seed = 0;
    Index n = 0;
    std::optional<double> beta;
    std::optional<VolterraCase> vcase;
    std::optional<Eigen::VectorXd> lower, upper, center, r_vec, y0, y_m1, w_m1, w_m2, known;
    double radius = 0;
    std::optional<Eigen::MatrixXd> P, Q, A;
    std::optional<std::pair<double, double>> lip;

    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream iss(line);
        std::string key;
        iss >> key;
        if (key == "end") break;
        if (key == "name") iss >> name;
        else if (key == "family") iss >> family;
        else if (key == "rng_seed") iss >> rng_seed;
        else if (key == "dim") iss >> n;
        else if (key == "beta") { double b; iss >> b; beta = b; }
        else if (key == "case") { std::string c; iss >> c; vcase = volterra_case_from(c); }
        else if (key == "set") iss >> set_kind;
        else if (key == "lower") lower = detail::parse_vector(line, "lower");
        else if (key == "upper") upper = detail::parse_vector(line, "upper");
        else if (key == "center") center = detail::parse_vector(line, "center");
        else if (key == "radius") iss >> radius;
        else if (key == "bifunction") iss >> bifunction_kind;
        else if (key == "P") P = detail::parse_matrix(is, line, "P");
        else if (key == "Q") Q = detail::parse_matrix(is, line, "Q");
        else if (key == "A") A = detail::parse_matrix(is, line, "A");
        else if (key == "r") r_vec = detail::parse_vector(line, "r");
        else if (key == "lipschitz") { double a, b; iss >> a >> b; lip = {a, b}; }
        else if (key == "y0") y0 = detail::parse_vector(line, "y0");
        else if (key == "y_m1") y_m1 = detail::parse_vector(line, "y_m1");
        else if (key == "w_m1") w_m1 = detail::parse_vector(line, "w_m1");
        else if (key == "w_m2") w_m2 = detail::parse_vector(line, "w_m2");
        else if (key == "known_solution") known = detail::parse_vector(line, "known_solution");
        else throw std::runtime_error("instance file: unknown key '" + key + "'");
    }
    if (!y0 || !y_m1 || !w_m1 || !w_m2) throw std::runtime_error("instance file: missing seeds");

    FeasibleSet<double> C = [&]() -> FeasibleSet<double> {
        if (set_kind == "box") {
            if (!lower || !upper) throw std::runtime_error("instance file: missing box bounds");
            return Box<double>(*lower, *upper);
        }
        if (set_kind == "ball") {
            if (!center) throw std::runtime_error("instance file: missing ball center");
            return Ball<double>(*center, radius);
        }
        throw std::runtime_error("instance file: unknown set kind '" + set_kind + "'");
    }();

    AnyBifunction<double> f = [&]() -> AnyBifunction<double> {
        if (bifunction_kind == "structural") {
            if (family == "skew") {
                auto rebuilt = gen_skew<double>(n, rng_seed);
                return rebuilt.f;
            }
            if (family == "volterra") {
                if (!vcase) throw std::runtime_error("instance file: volterra without case");
                auto rebuilt = gen_volterra<double>(n, *vcase);
                return rebuilt.f;
            }
            throw std::runtime_error("instance file: structural bifunction for unknown family");
        }
        if (bifunction_kind == "quadratic") {
            if (!P || !Q || !r_vec) throw std::runtime_error("instance file: incomplete quadratic");
            QuadraticBifunction<double> q(*P, *Q, *r_vec);
            if (lip) q.lipschitz = lip;
            return q;
        }
        if (bifunction_kind == "linear") {
            if (!A) throw std::runtime_error("instance file: missing matrix A");
            LinearOpBifunction<double> l(*A);
            if (lip) l.lipschitz = lip;
            return l;
        }
        throw std::runtime_error("instance file: unknown bifunction kind");
    }();
    if (lip) std::visit([&](auto& g) { g.lipschitz = lip; }, f);

    return ProblemInstance<double>{name,
                                   family,
                                   std::move(f),
                                   std::move(C),
                                   InitialPoints<double>{*y0, *y_m1, *w_m1, *w_m2},
                                   known ? std::optional<VectorX<double>>(*known) : std::nullopt,
                                   rng_seed,
                                   vcase,
                                   beta};
}

} // namespace eqp
