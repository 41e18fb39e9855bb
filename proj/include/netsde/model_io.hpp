#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "netsde/network.hpp"
#include "netsde/solver.hpp"

namespace netsde {

/// Malformed model file: syntax errors carry line/column, semantic errors the
/// key path and the violated rule.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::string what) : std::runtime_error(std::move(what)) {}
};

struct ParsedModel {
    NetworkModel model;
    SolverConfig config;
    InitialSpec initial;
};

/// Parses and fully validates a JSON model document. Vertex indices are
/// 1-based in the file and 0-based in memory.
ParsedModel parse_model(const std::string& text);

std::string serialize_model(const ParsedModel& parsed);

/// Header `t,e<j>_x<k>,...,v<i>,...`, one row per snapshot, 17 significant
/// digits, locale independent.
void write_trajectory(std::ostream& out, const GridLayout& grid, const Trajectory& traj);

struct TrajectoryTable {
    std::vector<std::string> columns; // without the leading "t"
    std::vector<double> times;
    Eigen::MatrixXd values; // snapshot rows
};

TrajectoryTable read_trajectory(std::istream& in);

std::string summary_json(const MomentStats& stats, const SolverConfig& config);

} // namespace netsde
