// Command-line front end: single solves, benchmark grids, parameter
// validation, and problem-instance generation. Results are CSV; the
// per-iteration file is the plotting interface.

#include "eqp/bench.hpp"
#include "eqp/csv.hpp"
#include "eqp/problems.hpp"
#include "eqp/run.hpp"
#include "eqp/solver.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> algo;
    std::optional<double> alpha, delta, mu, lambda0, eps;
    std::optional<int> max_iter;
    std::optional<std::string> problem, vcase, instance;
    std::optional<int> m, n_grid;
    std::optional<double> beta;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "key = value config file");
    cmd->add_option("--seed", f.seed, "instance RNG seed");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--algo", f.algo, "icseg | sgeg_plain | egm");
    cmd->add_option("--alpha", f.alpha, "inertial weight");
    cmd->add_option("--delta", f.delta, "correction weight");
    cmd->add_option("--mu", f.mu, "stepsize safety factor");
    cmd->add_option("--lambda0", f.lambda0, "initial (or constant) stepsize");
    cmd->add_option("--max-iter", f.max_iter, "iteration cap");
    cmd->add_option("--eps", f.eps, "stopping threshold on E_n");
    cmd->add_option("--problem", f.problem,
                    "nash_cournot | skew | volterra | strongly_pseudomonotone");
    cmd->add_option("--m", f.m, "problem dimension");
    cmd->add_option("--n-grid", f.n_grid, "grid points (volterra)");
    cmd->add_option("--case", f.vcase, "initial-point case I..IV (volterra)");
    cmd->add_option("--beta", f.beta, "strong pseudomonotonicity modulus");
    cmd->add_option("--instance", f.instance, "serialized instance file to solve");
}

eqp::RunConfig resolve_config(const CommonFlags& f) {
    eqp::RunConfig cfg;
    if (!f.config_path.empty()) cfg = eqp::parse_config_file(f.config_path, cfg);
    if (f.problem) cfg.problem = *f.problem;
    if (f.m) cfg.m = *f.m;
    if (f.n_grid) cfg.n_grid = *f.n_grid;
    if (f.vcase) cfg.volterra_case = *f.vcase;
    if (f.beta) cfg.beta = *f.beta;
    if (f.seed) cfg.seed = *f.seed;
    if (f.instance) cfg.instance_path = *f.instance;
    if (f.algo) cfg.algorithm = *f.algo;
    if (f.alpha) cfg.alpha = *f.alpha;
    if (f.delta) cfg.delta = *f.delta;
    if (f.mu) cfg.mu = *f.mu;
    if (f.lambda0) cfg.lambda0 = *f.lambda0;
    if (f.max_iter) cfg.max_iter = *f.max_iter;
    if (f.eps) cfg.eps = *f.eps;
    if (f.out) cfg.out_dir = *f.out;
    return cfg;
}

int cmd_run(const CommonFlags& flags) {
    const eqp::RunConfig cfg = resolve_config(flags);
    const eqp::RunOutcome out = eqp::run_and_write(cfg);
    std::cout << "status: " << out.summary.status << "  iterations: " << out.summary.iterations
              << "  final E_n: " << eqp::g17(out.summary.final_residual)
              << "  wall_s: " << out.summary.wall_s << '\n'
              << "artifacts in " << cfg.out_dir << '\n';
    return out.exit_code;
}

int cmd_bench(const CommonFlags& flags, const std::string& suite, std::vector<long> dims,
              std::vector<std::string> algos, std::vector<std::string> cases, int jobs) {
    eqp::BenchSpec spec;
    spec.suite = suite;
    for (long d : dims) spec.dims.push_back(static_cast<eqp::Index>(d));
    spec.cases = std::move(cases);
    if (!algos.empty()) spec.algorithms = std::move(algos);
    if (flags.seed) spec.seed = *flags.seed;
    spec.jobs = jobs;
    if (flags.max_iter) spec.max_iter = *flags.max_iter;
    if (flags.eps) spec.eps = *flags.eps;
    spec.alpha = flags.alpha;
    spec.delta = flags.delta;
    spec.mu = flags.mu;
    spec.lambda0 = flags.lambda0;

    const eqp::BenchResult result = eqp::run_bench(spec);
    std::cout << result.text_table();

    const std::string out_dir = flags.out.value_or(".");
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream f(std::filesystem::path(out_dir) / ("bench_" + suite + ".csv"),
                        std::ios::binary);
        eqp::write_summary_csv(f, result.rows());
    }
    {
        std::ofstream f(std::filesystem::path(out_dir) / ("bench_" + suite + ".txt"),
                        std::ios::binary);
        f << result.text_table();
    }
    for (const auto& cell : result.cells) {
        if (cell.failed) std::cerr << "cell error (" << cell.summary.problem << "): " << cell.error << '\n';
    }
    return 0;
}

int cmd_validate(double alpha, double delta, double mu) {
    eqp::SolverParams<double> p;
    p.alpha = alpha;
    p.delta = delta;
    p.mu = mu;
    std::string verdict = "accepted";
    std::string reason;
    try {
        eqp::validate_params(p);
    } catch (const eqp::ParamError& ex) {
        verdict = "rejected";
        reason = ex.what();
    }
    std::cout << verdict;
    if (!reason.empty()) std::cout << ": " << reason;
    std::cout << '\n';
    if (alpha > 0.0 && alpha <= 0.5) {
        const double bound = eqp::delta_lower_bound(alpha);
        std::cout << "delta lower bound at alpha=" << eqp::g17(alpha) << ": " << eqp::g17(bound)
                  << '\n';
        if (bound < 1.0) {
            std::cout << "admissible delta interval: (" << eqp::g17(bound) << ", 1)\n";
        } else {
            std::cout << "admissible delta interval: empty\n";
        }
    } else if (alpha == 0.0) {
        std::cout << "admissible delta interval: (0, 1)\n";
    }
    return 0;
}

int cmd_gen(const CommonFlags& flags, const std::string& out_file) {
    const eqp::RunConfig cfg = resolve_config(flags);
    const eqp::ProblemInstance<double> inst = eqp::build_instance(cfg);
    if (out_file.empty() || out_file == "-") {
        eqp::save_instance(std::cout, inst);
    } else {
        std::ofstream f(out_file, std::ios::binary);
        if (!f) throw std::invalid_argument("gen: cannot open '" + out_file + "'");
        eqp::save_instance(f, inst);
        std::cout << "wrote " << out_file << " (" << inst.name << ")\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium-problem solvers and benchmarks"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run = app.add_subcommand("run", "run one solve and write CSV artifacts");
    add_common_flags(run, run_flags);

    CommonFlags bench_flags;
    std::string suite = "skew";
    std::vector<long> dims;
    std::vector<std::string> algos, cases;
    int jobs = 1;
    auto* bench = app.add_subcommand("bench", "run a benchmark grid");
    bench->add_option("suite", suite, "nash_cournot | skew | volterra")->required();
    bench->add_option("--dims", dims, "dimensions (default: the family grid)");
    bench->add_option("--algos", algos, "algorithms (default: icseg)");
    bench->add_option("--cases", cases, "volterra cases (default: I II III IV)");
    bench->add_option("--jobs", jobs, "parallel cells");
    add_common_flags(bench, bench_flags);

    double v_alpha = 0, v_delta = 0, v_mu = 0;
    auto* validate = app.add_subcommand("validate", "check a parameter choice");
    validate->add_option("alpha", v_alpha)->required();
    validate->add_option("delta", v_delta)->required();
    validate->add_option("mu", v_mu)->required();

    CommonFlags gen_flags;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "emit a serialized problem instance");
    gen->add_option("--out-file", gen_out, "destination ('-' for stdout)");
    add_common_flags(gen, gen_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_flags);
        if (bench->parsed()) return cmd_bench(bench_flags, suite, dims, algos, cases, jobs);
        if (validate->parsed()) return cmd_validate(v_alpha, v_delta, v_mu);
        if (gen->parsed()) return cmd_gen(gen_flags, gen_out);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 1;
}
