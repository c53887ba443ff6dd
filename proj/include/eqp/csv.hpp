#pragma once

#include "eqp/solver.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace eqp {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string g17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SummaryRow {
    std::string algorithm;
    std::string problem;
    Index dimension = 0;
    int iterations = 0;
    double final_residual = 0;
    double wall_s = 0;
    std::string status;
};

inline constexpr const char* kTrajectoryHeader = "n,E_n,lambda_n,elapsed_s";
inline constexpr const char* kSummaryHeader =
    "algorithm,problem,dimension,iterations,final_E_n,wall_s,status";

inline void write_trajectory_csv(std::ostream& os, const Trajectory<double>& traj) {
    os << kTrajectoryHeader << '\n';
    for (const auto& rec : traj.records) {
        os << rec.n << ',' << g17(rec.residual) << ',' << g17(rec.lambda) << ','
           << g17(rec.elapsed_s) << '\n';
    }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        os << r.algorithm << ',' << r.problem << ',' << r.dimension << ',' << r.iterations << ','
           << g17(r.final_residual) << ',' << g17(r.wall_s) << ',' << r.status << '\n';
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream iss(line);
    while (std::getline(iss, field, ',')) out.push_back(field);
    return out;
}

struct TrajectoryCsvRow {
    int n;
    double residual, lambda, elapsed_s;
};

inline std::vector<TrajectoryCsvRow> parse_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kTrajectoryHeader) {
        throw std::runtime_error("trajectory csv: bad header");
    }
    std::vector<TrajectoryCsvRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 4) throw std::runtime_error("trajectory csv: bad row");
        rows.push_back({std::stoi(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3])});
    }
    return rows;
}

inline std::vector<SummaryRow> parse_summary_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kSummaryHeader) {
        throw std::runtime_error("summary csv: bad header");
    }
    std::vector<SummaryRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw std::runtime_error("summary csv: bad row");
        rows.push_back({f[0], f[1], static_cast<Index>(std::stoll(f[2])), std::stoi(f[3]),
                        std::stod(f[4]), std::stod(f[5]), f[6]});
    }
    return rows;
}

} // namespace eqp
