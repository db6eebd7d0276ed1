#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "darboux/config.hpp"
#include "darboux/family.hpp"

namespace darboux {

/// Command-line flags that override config values.
struct CommandOverrides {
    std::optional<std::string> out;
    /// Curve samples (Fourier curves only) and the fine verification resolution.
    std::optional<std::size_t> n;
    /// Simulation step and the fine verification step.
    std::optional<double> dt;
    std::optional<std::size_t> steps;
    std::optional<double> tolerance_scale;
};

/// Applies the overrides and re-validates.
[[nodiscard]] RunConfig apply_overrides(RunConfig config, const CommandOverrides& overrides);

/// Writes curve.csv, summary.json and config.json. Returns the exit status.
int analyze_command(const RunConfig& config, std::ostream& log);

struct VerificationResult {
    std::vector<ResidualReport> fine;
    std::vector<ResidualReport> coarse;
    std::vector<ConvergenceReport> convergence;
    std::string table;
    /// Every pass flag true and every identity that holds also converges.
    bool ok = true;
};

/// Every identity on the selected families at (N, dt) and (N/2, 2 dt).
[[nodiscard]] VerificationResult run_verification(const RunConfig& config);

/// Writes verify.json (reports at both resolutions), verify.txt and
/// config.json; prints the table. Exit status 3 when anything fails.
int verify_command(const RunConfig& config, std::ostream& log);

/// Writes snapshots.csv, diagnostics.jsonl and config.json. Output written
/// before a numeric failure is kept; the error is rethrown.
int simulate_command(const RunConfig& config, std::ostream& log);

/// Reads a snapshot file and writes an SVG.
int render_command(const std::filesystem::path& snapshots, const std::filesystem::path& svg, std::ostream& log);

}  // namespace darboux
