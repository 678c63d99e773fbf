#include "monosob/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace monosob {
namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string resolution_pair(const VerificationReport& r) {
    return std::to_string(r.resolution) + "/" + std::to_string(r.resolution_fine);
}

/// Numbers go through the 12-digit text form so that JSON and CSV agree.
nlohmann::ordered_json json_number(double x) {
    if (!std::isfinite(x)) return format_number(x);
    return std::stod(format_number(x));
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols = {"case_id",    "anchor",    "lhs",    "rhs",    "ratio", "worst_t",
                                                  "resolution", "stability", "family", "space",  "status", "note"};
    return cols;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    const auto& cols = report_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
    out << "\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << csv_field(r.case_id) << ',' << csv_field(r.anchor) << ',' << format_number(r.lhs) << ','
            << format_number(r.rhs) << ',' << format_number(r.ratio) << ',' << format_number(r.worst_t) << ','
            << resolution_pair(r) << ',' << format_number(r.stability) << ',' << csv_field(r.family) << ','
            << csv_field(row.space) << ',' << to_string(r.status) << ',' << csv_field(r.note) << "\n";
    }
    return out.str();
}

std::string report_json(const std::vector<ReportRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        const auto& r = row.report;
        nlohmann::ordered_json j;
        j["case_id"] = r.case_id;
        j["anchor"] = r.anchor;
        j["lhs"] = json_number(r.lhs);
        j["rhs"] = json_number(r.rhs);
        j["ratio"] = json_number(r.ratio);
        j["worst_t"] = json_number(r.worst_t);
        j["resolution"] = resolution_pair(r);
        j["stability"] = json_number(r.stability);
        j["family"] = r.family;
        j["space"] = row.space;
        j["status"] = to_string(r.status);
        j["note"] = r.note;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string scaling_csv(const ScalingResult& r) {
    std::ostringstream out;
    out << "q,sweep,slope,oracle_slope,invariant,note\n";
    for (const auto& c : r.candidates) {
        if (c.skipped) {
            out << format_number(c.q) << ",,,,," << csv_field(c.note) << "\n";
            continue;
        }
        out << format_number(c.q) << ",isotropic," << format_number(c.isotropic_slope) << ','
            << format_number(c.isotropic_oracle) << ',' << (c.invariant ? "yes" : "no") << ",\n";
        for (std::size_t k = 0; k < c.axis_slopes.size(); ++k)
            out << format_number(c.q) << ",axis" << k + 1 << ',' << format_number(c.axis_slopes[k]) << ','
                << format_number(c.axis_oracles[k]) << ',' << (c.invariant ? "yes" : "no") << ",\n";
    }
    return out.str();
}

std::string constants_csv(const std::vector<ConstantEstimate>& rows) {
    std::ostringstream out;
    out << "case_id,family,best_ratio,grid_best,trace_length,flagged,params\n";
    for (const auto& e : rows) {
        std::string params;
        for (const auto& [k, v] : e.best_params) params += (params.empty() ? "" : ";") + k + "=" + format_number(v);
        out << csv_field(e.case_id) << ',' << csv_field(e.family) << ',' << format_number(e.best_ratio) << ','
            << format_number(e.grid_best) << ',' << e.trace_length << ',' << (e.flagged ? "yes" : "no") << ','
            << csv_field(params) << "\n";
    }
    return out.str();
}

std::string constants_json(const std::vector<ConstantEstimate>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : rows) {
        nlohmann::ordered_json j;
        j["case_id"] = e.case_id;
        j["family"] = e.family;
        j["best_ratio"] = json_number(e.best_ratio);
        j["grid_best"] = json_number(e.grid_best);
        j["trace_length"] = e.trace_length;
        j["flagged"] = e.flagged;
        nlohmann::ordered_json p = nlohmann::ordered_json::object();
        for (const auto& [k, v] : e.best_params) p[k] = json_number(v);
        j["params"] = std::move(p);
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

void ensure_writable_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw std::runtime_error("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    const auto probe = dir / ".monosob_write_probe";
    {
        std::ofstream f(probe);
        if (!f) throw std::runtime_error("output directory " + dir.string() + " is not writable");
    }
    std::filesystem::remove(probe, ec);
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream f(file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + file.string());
    f << text;
    if (!f) throw std::runtime_error("error while writing " + file.string());
}

}  // namespace monosob
