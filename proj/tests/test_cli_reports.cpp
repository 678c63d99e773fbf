#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "monosob/runner.hpp"

using namespace monosob;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("monosob_test_" + name);
    fs::remove_all(d);
    return d;
}

ReportRow sample_row(Status s) {
    ReportRow r;
    r.report.case_id = "T32.i";
    r.report.anchor = case_anchor("T32.i");
    r.report.family = "cone[n=1]";
    r.report.lhs = 0.1;
    r.report.rhs = 0.3;
    r.report.ratio = 1.0 / 3.0;
    r.report.resolution = 64;
    r.report.resolution_fine = 128;
    r.report.status = s;
    r.report.note = "a, \"quoted\" note";
    return r;
}

const char* kSmallConfig = R"(A: [2]
resolution: 512
grid: 1024
cases: [T32.i, T32.ii, T32.iv]
families:
  - tag: cone
    params: {R: [1, 2]}
p_scalar: 2
)";

}  // namespace

TEST_CASE("number formatting", "[cli_reports]") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("CSV and JSON carry the same fields", "[cli_reports]") {
    const std::vector<ReportRow> rows{sample_row(Status::pass), sample_row(Status::fail)};
    const std::string csv = report_csv(rows);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "case_id,anchor,lhs,rhs,ratio,worst_t,resolution,stability,family,space,status,note");
    CHECK_THAT(csv, ContainsSubstring("\"a, \"\"quoted\"\" note\""));
    CHECK_THAT(csv, ContainsSubstring("64/128"));
    const auto j = nlohmann::ordered_json::parse(report_json(rows));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2u);
    std::size_t k = 0;
    for (auto it = j[0].begin(); it != j[0].end(); ++it, ++k) CHECK(it.key() == report_columns()[k]);
    CHECK(j[1]["status"] == "fail");
    CHECK(j[0]["note"] == "a, \"quoted\" note");
}

TEST_CASE("exit status", "[cli_reports]") {
    CHECK(exit_status({sample_row(Status::pass), sample_row(Status::refused)}) == 0);
    CHECK(exit_status({sample_row(Status::pass), sample_row(Status::unstable)}) == 1);
    CHECK(exit_status({sample_row(Status::anomaly)}) == 1);
}

TEST_CASE("config parsing and validation", "[cli_reports]") {
    const auto c = parse_config(kSmallConfig);
    CHECK(c.A == std::vector<double>{2.0});
    CHECK(c.effective_resolution() == 512u);
    CHECK(c.families.at(0).expand().size() == 2u);
    CHECK(c.case_params().p_scalar == 2.0);
    CHECK(default_resolution(1) == 4096u);
    CHECK(default_resolution(2) == 128u);
    CHECK(default_resolution(3) == 64u);
    try {
        (void)parse_config("A: [1]\ncases: [T32.i, T99]\n", "bad.yaml");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "bad.yaml");
        CHECK(e.line() == 2);
        CHECK_THAT(std::string(e.what()), ContainsSubstring("T99"));
    }
    CHECK_THROWS_AS(parse_config("A: [1]\nfamilies:\n  - tag: gaussian\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("A: [1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("A: [1]\nspaces: [\"banach:p=2\"]\n"), ConfigError);
}

TEST_CASE("output directory precedence", "[cli_reports]") {
    RunConfig c;
    ::unsetenv(kOutputEnv);
    CHECK(resolve_output_dir(std::nullopt, c) == fs::path("reports"));
    ::setenv(kOutputEnv, "/tmp/from_env", 1);
    CHECK(resolve_output_dir(std::nullopt, c) == fs::path("/tmp/from_env"));
    c.out = "from_config";
    CHECK(resolve_output_dir(std::nullopt, c) == fs::path("from_config"));
    CHECK(resolve_output_dir(std::string("from_flag"), c) == fs::path("from_flag"));
    ::unsetenv(kOutputEnv);
}

TEST_CASE("unwritable output directories are named", "[cli_reports]") {
    const fs::path file = fresh_dir("blocker");
    std::ofstream(file) << "x";
    CHECK_THROWS_WITH(ensure_writable_dir(file / "sub"), ContainsSubstring(file.string()));
    fs::remove_all(file);
}

TEST_CASE("run_and_report writes matching CSV and JSON", "[cli_reports]") {
    const auto out = fresh_dir("run");
    std::ostringstream log;
    const auto r = run_and_report(parse_config(kSmallConfig), true, out, log);
    CHECK(r.exit_code == 0);
    CHECK(r.rows.size() == 6u);
    REQUIRE(fs::exists(out / "report.csv"));
    REQUIRE(fs::exists(out / "report.json"));
    std::ifstream js(out / "report.json");
    const auto j = nlohmann::json::parse(js);
    CHECK(j.size() == r.rows.size());
    for (const auto& row : j) CHECK(row["status"] == "pass");
    std::ifstream cs(out / "report.csv");
    std::stringstream buf;
    buf << cs.rdbuf();
    CHECK(buf.str() == report_csv(r.rows));
    fs::remove_all(out);
}

TEST_CASE("spaces on a step profile and the rearrangement CSV", "[cli_reports]") {
    const auto c = parse_config(kSmallConfig);
    const Integral v = evaluate_space(c, "lorentz:p=3,q=2", std::string("step:c=2,a=0.5"));
    REQUIRE(v.finite());
    CHECK_THAT(v.value, WithinRel(2.0 * std::sqrt(1.5) * std::cbrt(0.5), 1e-6));
    CHECK_THROWS_AS(evaluate_space(c, "lp:p=2", std::string("step:c=2,b=1")), std::invalid_argument);
    std::ostringstream os;
    write_rearrangement(c, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,value");
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    CHECK(n == c.grid);
}
