#include "eqp/run.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace eqp {

namespace {

bool parse_bool_like_u64(const std::string& v, std::uint64_t& out) {
    std::istringstream iss(v);
    return static_cast<bool>(iss >> out);
}

void assign_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto to_d = [&](const std::string& v) { return std::stod(v); };
    auto to_i = [&](const std::string& v) { return std::stoi(v); };
    if (key == "problem") cfg.problem = value;
    else if (key == "m") cfg.m = to_i(value);
    else if (key == "n_grid") cfg.n_grid = to_i(value);
    else if (key == "case") cfg.volterra_case = value;
    else if (key == "beta") cfg.beta = to_d(value);
    else if (key == "seed") {
        std::uint64_t s;
        if (!parse_bool_like_u64(value, s)) throw std::invalid_argument("config: bad seed value");
        cfg.seed = s;
    } else if (key == "instance") cfg.instance_path = value;
    else if (key == "algo" || key == "algorithm") cfg.algorithm = value;
    else if (key == "alpha") cfg.alpha = to_d(value);
    else if (key == "delta") cfg.delta = to_d(value);
    else if (key == "mu") cfg.mu = to_d(value);
    else if (key == "lambda0") cfg.lambda0 = to_d(value);
    else if (key == "max_iter") cfg.max_iter = to_i(value);
    else if (key == "eps" || key == "eps_stop") cfg.eps = to_d(value);
    else if (key == "out" || key == "out_dir") cfg.out_dir = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

} // namespace

RunConfig parse_config_text(std::istream& is, RunConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        std::string key, value;
        if (eq != std::string::npos) {
            key = line.substr(0, eq);
            value = line.substr(eq + 1);
        } else {
            key = line;
        }
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        if (key.empty()) continue;
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        }
        assign_key(base, key, value);
    }
    return base;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open '" + path + "'");
    return parse_config_text(f, std::move(base));
}

std::string config_echo(const RunConfig& cfg) {
    std::ostringstream os;
    os << "problem = " << cfg.problem << '\n';
    os << "m = " << cfg.m << '\n';
    os << "n_grid = " << cfg.n_grid << '\n';
    os << "case = " << cfg.volterra_case << '\n';
    os << "beta = " << g17(cfg.beta) << '\n';
    os << "seed = " << cfg.seed << '\n';
    if (cfg.instance_path) os << "instance = " << *cfg.instance_path << '\n';
    os << "algo = " << cfg.algorithm << '\n';
    os << "alpha = " << g17(cfg.alpha) << '\n';
    os << "delta = " << g17(cfg.delta) << '\n';
    os << "mu = " << g17(cfg.mu) << '\n';
    os << "lambda0 = " << g17(cfg.lambda0) << '\n';
    os << "max_iter = " << cfg.max_iter << '\n';
    os << "eps = " << g17(cfg.eps) << '\n';
    os << "out = " << cfg.out_dir << '\n';
    return os.str();
}

ProblemInstance<double> build_instance(const RunConfig& cfg) {
    if (cfg.instance_path) {
        std::ifstream f(*cfg.instance_path);
        if (!f) throw std::invalid_argument("instance: cannot open '" + *cfg.instance_path + "'");
        return load_instance(f);
    }
    if (cfg.problem == "nash_cournot") return gen_nash_cournot(cfg.m, cfg.seed);
    if (cfg.problem == "skew") return gen_skew(cfg.m, cfg.seed);
    if (cfg.problem == "volterra") {
        return gen_volterra(cfg.n_grid, volterra_case_from(cfg.volterra_case));
    }
    if (cfg.problem == "strongly_pseudomonotone" || cfg.problem == "strongly_pm") {
        return gen_strongly_pseudomonotone(cfg.m, cfg.beta, cfg.seed);
    }
    throw std::invalid_argument("config: unknown problem '" + cfg.problem + "'");
}

RunOutcome run_single(const RunConfig& cfg, const IterationObserver<double>& observer) {
    const ProblemInstance<double> inst = build_instance(cfg);

    SolveResult<double> result;
    if (cfg.algorithm == "icseg" || cfg.algorithm == "sgeg_plain") {
        SolverParams<double> params;
        params.alpha = cfg.alpha;
        params.delta = cfg.delta;
        if (cfg.algorithm == "sgeg_plain") params.alpha = params.delta = 0.0;
        params.mu = cfg.mu;
        params.lambda0 = cfg.lambda0;
        params.max_iter = cfg.max_iter;
        params.eps_stop = cfg.eps;
        result = solve(inst.f, inst.C, params, inst.start, observer);
    } else if (cfg.algorithm == "egm") {
        const VectorX<double> x0 = project(inst.C, inst.start.y0);
        result = solve_egm(inst.f, inst.C, cfg.lambda0, x0, cfg.max_iter, cfg.eps);
    } else {
        throw std::invalid_argument("config: unknown algorithm '" + cfg.algorithm + "'");
    }

    RunOutcome out;
    out.trajectory = std::move(result.trajectory);
    out.solution = std::move(result.solution);
    const double wall =
        out.trajectory.records.empty() ? 0.0 : out.trajectory.records.back().elapsed_s;
    out.summary = SummaryRow{cfg.algorithm,
                             inst.name,
                             inst.dim(),
                             out.trajectory.iterations(),
                             static_cast<double>(out.trajectory.final_residual()),
                             wall,
                             to_string(out.trajectory.terminal)};
    out.exit_code = (out.trajectory.terminal == Terminal::max_iter) ? 2 : 0;
    return out;
}

RunOutcome run_and_write(const RunConfig& cfg) {
    RunOutcome out = run_single(cfg);
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    {
        std::ofstream f(fs::path(cfg.out_dir) / "trajectory.csv", std::ios::binary);
        write_trajectory_csv(f, out.trajectory);
    }
    {
        std::ofstream f(fs::path(cfg.out_dir) / "summary.csv", std::ios::binary);
        write_summary_csv(f, {out.summary});
    }
    {
        std::ofstream f(fs::path(cfg.out_dir) / "config_resolved.txt", std::ios::binary);
        f << config_echo(cfg);
    }
    return out;
}

} // namespace eqp
