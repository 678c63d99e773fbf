#pragma once

// CSV and JSON report writers. Both carry the same fields in the same order;
// floats use 12 significant digits.

#include <filesystem>
#include <string>
#include <vector>

#include "monosob/inequality_verifier.hpp"
#include "monosob/sharpness.hpp"

namespace monosob {

struct ReportRow {
    VerificationReport report;
    std::string space;  // base space or weight of the case, if any
};

/// "%.12g"; nan and inf spelled out.
std::string format_number(double x);

const std::vector<std::string>& report_columns();
std::string report_csv(const std::vector<ReportRow>& rows);
std::string report_json(const std::vector<ReportRow>& rows);

std::string scaling_csv(const ScalingResult& r);
std::string constants_csv(const std::vector<ConstantEstimate>& rows);
std::string constants_json(const std::vector<ConstantEstimate>& rows);

/// Creates the directory if needed; throws std::runtime_error naming the path
/// when it cannot be written.
void ensure_writable_dir(const std::filesystem::path& dir);
void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace monosob
