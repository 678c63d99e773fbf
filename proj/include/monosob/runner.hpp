#pragma once

// Orchestration behind the CLI subcommands. Exit codes: 0 all checks passed,
// 1 some check failed (fail, unstable, anomaly), 2 invalid input.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "monosob/report.hpp"
#include "monosob/run_config.hpp"

namespace monosob {

inline constexpr const char* kOutputEnv = "MONOSOB_OUT";

/// --out flag, then the config, then $MONOSOB_OUT, then "reports".
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag, const RunConfig& config);

/// Every (family instance, case, space) row. `sweep` expands the full
/// parameter grids; otherwise every family runs once at the first values.
std::vector<ReportRow> run_matrix(const RunConfig& config, bool sweep);

/// 0 iff every row passed or was refused.
int exit_status(const std::vector<ReportRow>& rows);

struct RunOutcome {
    int exit_code = 0;
    std::vector<ReportRow> rows;
    std::filesystem::path csv;
    std::filesystem::path json;
};

/// Runs the matrix and writes report.csv / report.json into `out`.
RunOutcome run_and_report(const RunConfig& config, bool sweep, const std::filesystem::path& out, std::ostream& log);

/// Scaling test on the first family instance and best-constant estimates for
/// every case; writes scaling.csv, constants.csv and constants.json.
int run_sharpness(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);

/// The first family instance of the config (defaults to the cone).
TestFunction first_instance(const RunConfig& config);

/// f*_mu as CSV (t,value).
void write_rearrangement(const RunConfig& config, std::ostream& os);

/// Norm of `space` on the first family instance, or on the step profile
/// "step:c=C,a=A" when given.
Integral evaluate_space(const RunConfig& config, const std::string& space, const std::optional<std::string>& profile);

}  // namespace monosob
