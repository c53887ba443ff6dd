#include "eqp/bench.hpp"
#include "eqp/csv.hpp"
#include "eqp/run.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace eqp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Trajectory CSV with the elapsed column blanked, for byte comparisons.
std::string strip_elapsed(const std::string& csv) {
    std::istringstream is(csv);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line)) {
        const auto pos = line.rfind(',');
        os << line.substr(0, pos) << '\n';
    }
    return os.str();
}

fs::path fresh_dir(const char* name) {
    const fs::path p = fs::temp_directory_path() / "eqp_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("config parsing with comments and overrides") {
    std::istringstream cfg(
        "problem = skew\n"
        "m = 12        # dimension\n"
        "# full-line comment\n"
        "algo = icseg\n"
        "alpha = 0.1\n"
        "delta = 0.5\n"
        "eps = 1e-6\n");
    const RunConfig parsed = parse_config_text(cfg);
    CHECK(parsed.problem == "skew");
    CHECK(parsed.m == 12);
    CHECK(parsed.delta == 0.5);

    std::istringstream bad("bogus_key = 1\n");
    try {
        parse_config_text(bad);
        FAIL("expected failure");
    } catch (const std::invalid_argument& ex) {
        CHECK(std::string(ex.what()).find("bogus_key") != std::string::npos);
    }

    std::istringstream malformed("problem skew\n");
    CHECK_THROWS_AS(parse_config_text(malformed), std::invalid_argument);
}

TEST_CASE("run_single exit codes") {
    RunConfig cfg;
    cfg.problem = "skew";
    cfg.m = 12;
    cfg.seed = 3;
    cfg.algorithm = "icseg";
    cfg.alpha = 0.1;
    cfg.delta = 0.5;

    // an infinite threshold stops right after the first iteration (the
    // exact-termination tolerance defaults to eps_stop, so the stop may
    // arrive through either branch)
    cfg.eps = std::numeric_limits<double>::infinity();
    const auto immediate = run_single(cfg);
    CHECK(immediate.exit_code == 0);
    const bool stopped = immediate.summary.status == "converged" ||
                         immediate.summary.status == "exact_solution";
    CHECK(stopped);
    CHECK(immediate.summary.iterations == 1);

    cfg.eps = 1e-300;
    cfg.max_iter = 1;
    const auto capped = run_single(cfg);
    CHECK(capped.exit_code == 2);
    CHECK(capped.summary.status == "max_iter");

    cfg.algorithm = "nonsense";
    CHECK_THROWS_AS(run_single(cfg), std::invalid_argument);
}

TEST_CASE("run artifacts: schema, round-trip, and reproducibility") {
    RunConfig cfg;
    cfg.problem = "skew";
    cfg.m = 15;
    cfg.seed = 7;
    cfg.algorithm = "icseg";
    cfg.alpha = 0.1;
    cfg.delta = 0.5;
    cfg.mu = 1e-5;
    cfg.lambda0 = 0.1;
    cfg.max_iter = 40;
    cfg.eps = 1e-300;

    const fs::path d1 = fresh_dir("run1");
    const fs::path d2 = fresh_dir("run2");
    cfg.out_dir = d1.string();
    const auto out1 = run_and_write(cfg);
    cfg.out_dir = d2.string();
    run_and_write(cfg);

    const std::string traj1 = slurp(d1 / "trajectory.csv");
    CHECK(traj1.rfind(kTrajectoryHeader, 0) == 0);
    CHECK(traj1.find('\r') == std::string::npos); // LF endings

    // parse-back equals the in-memory trajectory
    std::istringstream is(traj1);
    const auto rows = parse_trajectory_csv(is);
    REQUIRE(static_cast<int>(rows.size()) == out1.trajectory.iterations());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].n == out1.trajectory.records[i].n);
        CHECK(rows[i].residual == out1.trajectory.records[i].residual);
        CHECK(rows[i].lambda == out1.trajectory.records[i].lambda);
    }

    // summary row count and iteration count agree
    std::istringstream sis(slurp(d1 / "summary.csv"));
    const auto summaries = parse_summary_csv(sis);
    REQUIRE(summaries.size() == 1);
    CHECK(summaries[0].iterations == static_cast<int>(rows.size()));
    CHECK(summaries[0].status == "max_iter");

    // identical config + seed: byte-identical artifacts except elapsed
    CHECK(strip_elapsed(traj1) == strip_elapsed(slurp(d2 / "trajectory.csv")));

    // the resolved-config echo names the seed
    const std::string echo = slurp(d1 / "config_resolved.txt");
    CHECK(echo.find("seed = 7") != std::string::npos);
}

TEST_CASE("bench grid runs cells and marks failures without aborting") {
    BenchSpec spec;
    spec.suite = "skew";
    spec.dims = {10, 14};
    spec.algorithms = {"icseg", "egm"};
    spec.max_iter = 60;
    spec.eps = 1e-6;
    spec.seed = 5;
    spec.jobs = 2;
    const BenchResult res = run_bench(spec);
    REQUIRE(res.cells.size() == 4);
    for (const auto& c : res.cells) {
        CHECK_FALSE(c.failed);
        CHECK(c.summary.iterations >= 1);
    }
    const std::string table = res.text_table();
    CHECK(table.find("algorithm") != std::string::npos);
    CHECK(table.find("skew_m10_seed5") != std::string::npos);

    BenchSpec empty = spec;
    empty.algorithms = {};
    CHECK(run_bench(empty).cells.empty());

    BenchSpec bad = spec;
    bad.algorithms = {"nonsense"};
    const BenchResult failed = run_bench(bad);
    REQUIRE(failed.cells.size() == 2);
    CHECK(failed.cells[0].failed);
    CHECK(failed.cells[0].summary.status == "error");
}

TEST_CASE("volterra bench uses the case grid") {
    BenchSpec spec;
    spec.suite = "volterra";
    spec.cases = {"I", "IV"};
    spec.max_iter = 30;
    const BenchResult res = run_bench(spec);
    REQUIRE(res.cells.size() == 2);
    CHECK(res.cells[0].config.volterra_case == "I");
    CHECK(res.cells[1].config.volterra_case == "IV");
    CHECK(res.cells[0].config.lambda0 == 0.001); // family default
    CHECK(res.cells[0].config.delta == 0.95);
}

TEST_CASE("g17 formatting round-trips doubles exactly") {
    Rng rng(71);
    for (int k = 0; k < 1000; ++k) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(std::stod(g17(v)) == v);
    }
    CHECK(std::stod(g17(0.1)) == 0.1);
    CHECK(std::stod(g17(1e-300)) == 1e-300);
}

TEST_CASE("csv parsers reject malformed input") {
    std::istringstream bad_header("x,y\n1,2\n");
    CHECK_THROWS_AS(parse_trajectory_csv(bad_header), std::runtime_error);
    std::istringstream short_row(std::string(kTrajectoryHeader) + "\n1,2\n");
    CHECK_THROWS_AS(parse_trajectory_csv(short_row), std::runtime_error);
}

#ifdef EQP_TOOL_PATH
TEST_CASE("command-line binary end to end") {
    const fs::path dir = fresh_dir("cli");
    const std::string tool = EQP_TOOL_PATH;

    auto run_cmd = [&](const std::string& args) {
        const std::string cmd = tool + " " + args + " > " + (dir / "out.txt").string() + " 2>&1";
        const int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    };

    CHECK(run_cmd("validate 0.1 0.9 1e-5") == 0);
    CHECK(slurp(dir / "out.txt").find("accepted") != std::string::npos);

    CHECK(run_cmd("validate 0.5 0.49 0.5") == 0);
    CHECK(slurp(dir / "out.txt").find("rejected") != std::string::npos);

    // converged run exits 0
    CHECK(run_cmd("run --problem skew --m 12 --seed 2 --algo icseg --alpha 0.1 --delta 0.5 "
                  "--mu 1e-5 --lambda0 0.1 --eps inf --out " +
                  (dir / "a").string()) == 0);
    // capped run exits 2
    CHECK(run_cmd("run --problem skew --m 12 --seed 2 --algo icseg --alpha 0.1 --delta 0.5 "
                  "--mu 1e-5 --lambda0 0.1 --eps 1e-300 --max-iter 1 --out " +
                  (dir / "b").string()) == 2);
    // bad config exits 1
    CHECK(run_cmd("run --problem not_a_family --out " + (dir / "c").string()) == 1);

    // gen emits a loadable instance
    const fs::path inst = dir / "inst.txt";
    CHECK(run_cmd("gen --problem nash_cournot --m 6 --seed 9 --out-file " + inst.string()) == 0);
    std::ifstream f(inst);
    REQUIRE(f.good());
    const auto loaded = eqp::load_instance(f);
    CHECK(loaded.family == "nash_cournot");
    CHECK(loaded.dim() == 6);

    // and run accepts the instance file
    CHECK(run_cmd("run --instance " + inst.string() +
                  " --algo icseg --alpha 0.1 --delta 0.9 --mu 1e-5 --lambda0 0.1 "
                  "--eps inf --out " +
                  (dir / "d").string()) == 0);

    // config file + command-line override
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "problem = skew\nm = 10\nseed = 4\nalgo = icseg\nalpha = 0.1\ndelta = 0.5\n"
               "mu = 1e-5\nlambda0 = 0.1\neps = inf\n";
    }
    CHECK(run_cmd("run --config " + (dir / "run.cfg").string() + " --m 14 --out " +
                  (dir / "e").string()) == 0);
    CHECK(slurp(dir / "e" / "config_resolved.txt").find("m = 14") != std::string::npos);

    // bench grid writes the table artifacts
    CHECK(run_cmd("bench skew --dims 10 --algos icseg --max-iter 30 --seed 2 --out " +
                  (dir / "f").string()) == 0);
    CHECK(slurp(dir / "f" / "bench_skew.csv").rfind(eqp::kSummaryHeader, 0) == 0);
    CHECK(slurp(dir / "f" / "bench_skew.txt").find("skew_m10_seed2") != std::string::npos);
}
#endif
