#pragma once

#include "eqp/run.hpp"

#include <string>
#include <vector>

namespace eqp {

/// Grid spec for one benchmark family. Defaults reproduce the experiment
/// grids: nash_cournot at m in {50,100,200,300}, skew at m in
/// {500,1000,2000,3000}, volterra cases I-IV at n_grid = 500, each with the
/// family's published solver parameters.
struct BenchSpec {
    std::string suite = "skew";
    std::vector<Index> dims;               // m values; for volterra, ignored
    std::vector<std::string> cases;        // volterra only
    std::vector<std::string> algorithms = {"icseg"};
    std::uint64_t seed = 1;
    int jobs = 1;
    int max_iter = 5001;
    double eps = 1e-6;
    // per-family parameter defaults are applied in make_cell_config unless
    // the caller overrides them here
    std::optional<double> alpha, delta, mu, lambda0;
};

struct BenchCell {
    RunConfig config;
    SummaryRow summary;
    bool failed = false;      // cell-level error (marked, not fatal)
    std::string error;
};

struct BenchResult {
    std::vector<BenchCell> cells;
    std::vector<SummaryRow> rows() const;
    std::string text_table() const; // aligned plain-text table
};

/// Fills in the suite's default dims/cases and parameters.
RunConfig make_cell_config(const BenchSpec& spec, const std::string& algorithm, Index dim,
                           const std::string& vcase);

/// Runs the grid, optionally with `jobs` worker threads; a failing cell is
/// recorded with status "error" and does not abort the grid.
BenchResult run_bench(const BenchSpec& spec);

} // namespace eqp
