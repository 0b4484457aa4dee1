#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gregus/problem.hpp"

namespace gregus {

/// Effective command-line options; unset fields keep the problem file's
/// values.
struct RunOptions {
    std::optional<double> grid;
    std::optional<double> tol;
    std::optional<long> pairs;
    std::optional<uint64_t> seed;
    std::optional<std::string> schedule;  // "harmonic" or "geometric:<r>"
    bool force = false;
    std::string kind = "q_affine";        // check-affinity
    std::vector<std::string> map_names;   // check-affinity targets (default S, T)
    std::vector<Point> probes;            // check-commute diagnostics
    std::optional<Point> u_override;
};

/// One verdict line. Non-gating records are informational (solver
/// precondition warnings) and do not feed the exit code.
struct CheckRecord {
    std::string name;
    std::string verdict;
    int code = 0;     // 0 holds, 1 violated, 2 not_found/diverged
    bool gating = true;
    nlohmann::ordered_json data;
};

struct Report {
    nlohmann::ordered_json machine;  // stable: identical input + seed => identical bytes
    std::string text;                // human rendering; includes wall time
    int exit_code = 0;
};

/// Exit codes: 0 all holds, 1 violation found, 2 not_found/divergence,
/// 3 input error (raised by the caller via ParseError).
Report run_command(const std::string& command, const Problem& problem, const RunOptions& opts);

/// Subcommand names accepted by run_command, in the order "all" runs them.
std::vector<std::string> command_names();

}  // namespace gregus
