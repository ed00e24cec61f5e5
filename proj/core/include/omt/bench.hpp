#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "omt/omt.hpp"

namespace omt::bench {

struct Config {
    Algorithm algorithm = Algorithm::Inline;
    Strategy strategy = Strategy::Linear;
    std::string name() const;  // e.g. "inline-ada"
};

/// offline-lin, offline-bin, inline-lin, inline-bin, inline-ada.
std::vector<Config> all_configs();
/// Parses "inline-bin" style names; throws UsageError.
Config parse_config(const std::string& name);

using SolveFn = std::function<OmtResult(const OmtProblem&, const OmtOptions&)>;

struct BenchOptions {
    double timeout = 600.0;
    unsigned jobs = 1;
    std::vector<Config> configs = all_configs();
    /// Solver under test; defaults to omt::solve.
    SolveFn solver;
};

struct Row {
    std::string file;
    std::string config;
    std::string status;     // report status, or "error"
    std::string objective;  // report objective text incl. " (strict)"
    double time = 0.0;
    std::uint64_t smt_calls = 0;
    std::uint64_t minimize_calls = 0;
    bool agree = true;
    std::string error;
};

struct BenchReport {
    std::vector<Row> rows;  // sorted by file, then config order
    std::vector<std::string> disagreements;  // one entry per file
    bool agreed() const { return disagreements.empty(); }
};

/// Problem files (*.smt2) in the directory, sorted by name.
std::vector<std::filesystem::path> problem_files(const std::filesystem::path& dir);

/// Solves every file under every configuration. Results that are unknown
/// or errors take no part in the agreement check.
BenchReport run_bench(const std::vector<std::filesystem::path>& files, const BenchOptions& options);

/// Tab-separated table with a header line.
std::string format_table(const BenchReport& report);

} // namespace omt::bench
