#include "eqp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

namespace eqp {

namespace {

struct SuiteDefaults {
    std::vector<Index> dims;
    std::vector<std::string> cases;
    double alpha, delta, mu, lambda0;
};

SuiteDefaults suite_defaults(const std::string& suite) {
    if (suite == "nash_cournot") return {{50, 100, 200, 300}, {}, 0.1, 0.9, 1e-5, 0.1};
    if (suite == "skew") return {{500, 1000, 2000, 3000}, {}, 0.1, 0.5, 1e-5, 0.1};
    if (suite == "volterra") return {{}, {"I", "II", "III", "IV"}, 0.1, 0.95, 1e-5, 0.001};
    throw std::invalid_argument("bench: unknown suite '" + suite + "'");
}

} // namespace

RunConfig make_cell_config(const BenchSpec& spec, const std::string& algorithm, Index dim,
                           const std::string& vcase) {
    const SuiteDefaults def = suite_defaults(spec.suite);
    RunConfig cfg;
    cfg.problem = spec.suite;
    cfg.m = dim;
    cfg.n_grid = spec.suite == "volterra" ? (dim > 0 ? dim : 500) : 500;
    cfg.volterra_case = vcase.empty() ? "I" : vcase;
    cfg.seed = spec.seed;
    cfg.algorithm = algorithm;
    cfg.alpha = spec.alpha.value_or(def.alpha);
    cfg.delta = spec.delta.value_or(def.delta);
    cfg.mu = spec.mu.value_or(def.mu);
    cfg.lambda0 = spec.lambda0.value_or(def.lambda0);
    cfg.max_iter = spec.max_iter;
    cfg.eps = spec.eps;
    return cfg;
}

std::vector<SummaryRow> BenchResult::rows() const {
    std::vector<SummaryRow> out;
    out.reserve(cells.size());
    for (const auto& c : cells) out.push_back(c.summary);
    return out;
}

std::string BenchResult::text_table() const {
    std::vector<std::array<std::string, 7>> grid;
    grid.push_back({"algorithm", "problem", "dim", "iter", "final_E_n", "time_s", "status"});
    for (const auto& c : cells) {
        std::ostringstream e, t;
        e << std::scientific << std::setprecision(3) << c.summary.final_residual;
        t << std::fixed << std::setprecision(4) << c.summary.wall_s;
        grid.push_back({c.summary.algorithm, c.summary.problem,
                        std::to_string(c.summary.dimension), std::to_string(c.summary.iterations),
                        e.str(), t.str(), c.summary.status});
    }
    std::array<std::size_t, 7> width{};
    for (const auto& row : grid) {
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::ostringstream os;
    for (const auto& row : grid) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << std::left << std::setw(static_cast<int>(width[i]) + 2) << row[i];
        }
        os << '\n';
    }
    return os.str();
}

BenchResult run_bench(const BenchSpec& spec) {
    const SuiteDefaults def = suite_defaults(spec.suite);
    const std::vector<Index> dims = spec.dims.empty() ? def.dims : spec.dims;
    const std::vector<std::string> cases = [&] {
        if (spec.suite != "volterra") return std::vector<std::string>{""};
        return spec.cases.empty() ? def.cases : spec.cases;
    }();

    BenchResult result;
    for (const auto& algo : spec.algorithms) {
        if (spec.suite == "volterra") {
            for (const auto& c : cases) {
                BenchCell cell;
                cell.config = make_cell_config(spec, algo, 500, c);
                result.cells.push_back(std::move(cell));
            }
        } else {
            for (const Index m : dims) {
                BenchCell cell;
                cell.config = make_cell_config(spec, algo, m, "");
                result.cells.push_back(std::move(cell));
            }
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= result.cells.size()) return;
            BenchCell& cell = result.cells[i];
            try {
                const RunOutcome out = run_single(cell.config);
                cell.summary = out.summary;
            } catch (const std::exception& ex) {
                cell.failed = true;
                cell.error = ex.what();
                cell.summary = SummaryRow{cell.config.algorithm,
                                          cell.config.problem,
                                          cell.config.problem == "volterra" ? cell.config.n_grid
                                                                            : cell.config.m,
                                          0,
                                          0.0,
                                          0.0,
                                          "error"};
            }
        }
    };

    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return result;
}

} // namespace eqp
