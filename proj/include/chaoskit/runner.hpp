#pragma once

// Command runners shared by the C API and the command-line tool: each takes a
// run specification as JSON and produces a report (JSON and, where useful,
// flat CSV) plus the exit code of the run: 0 pass, 2 fail, 3 inconclusive.
// Invalid input raises; callers map exceptions to exit code 1.

#include <cstdint>
#include <string>

#include "chaoskit/json_io.hpp"

namespace ck {

inline constexpr const char* kVersion = "0.1.0";

struct RunResult {
    json report;
    std::string csv;  // empty when the command has no tabular form
    int exit_code = 0;
};

RunResult run_check(const json& runspec);
RunResult run_canonicalize(const json& runspec);
RunResult run_feasibility(const json& runspec);
RunResult run_simulate(const json& runspec);
RunResult run_selftest(const json& runspec);

// seeded generator of bounded random target specs (k1, k2 <= 3, coefficient
// magnitudes in [0.2, 3]); used by the selftest suites and the test suite
TargetSpec random_target_spec(std::uint64_t seed, std::uint64_t index);

}  // namespace ck
