#pragma once

#include "eqp/csv.hpp"
#include "eqp/problems.hpp"
#include "eqp/solver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace eqp {

/// One solve request: problem family and size, algorithm and its
/// parameters, output location. Built from a flat key-value config file
/// plus command-line overrides; the resolved form is echoed next to the
/// results so every run is reproducible from its own artifacts.
struct RunConfig {
    std::string problem = "skew"; // nash_cournot | skew | volterra | strongly_pseudomonotone
    Index m = 50;
    Index n_grid = 500;
    std::string volterra_case = "I";
    double beta = 1.0;
    std::uint64_t seed = 1;
    std::optional<std::string> instance_path; // overrides the generator when set

    std::string algorithm = "icseg"; // icseg | sgeg_plain | egm
    double alpha = 0.1;
    double delta = 0.5;
    double mu = 1e-5;
    double lambda0 = 0.1; // also the constant stepsize of egm
    int max_iter = 5001;
    double eps = 1e-6;

    std::string out_dir = ".";
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys are an
/// error naming the key.
RunConfig parse_config_text(std::istream& is, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});

/// The resolved-config echo written next to the results.
std::string config_echo(const RunConfig& cfg);

ProblemInstance<double> build_instance(const RunConfig& cfg);

struct RunOutcome {
    SummaryRow summary;
    Trajectory<double> trajectory;
    VectorX<double> solution;
    int exit_code = 0; // 0 converged/exact, 2 max_iter
};

/// Executes the configured solve. Throws on invalid configs; solver errors
/// propagate.
RunOutcome run_single(const RunConfig& cfg,
                      const IterationObserver<double>& observer = {});

/// run_single + artifact files: trajectory.csv, summary.csv,
/// config_resolved.txt under cfg.out_dir (created if missing).
RunOutcome run_and_write(const RunConfig& cfg);

} // namespace eqp
