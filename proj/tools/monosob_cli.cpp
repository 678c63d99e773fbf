#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "monosob/report.hpp"
#include "monosob/run_config.hpp"
#include "monosob/runner.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::size_t resolution = 0;
    std::size_t grid = 0;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> cases;
    std::string family;
    std::vector<std::string> params;
    std::string space;
    std::vector<double> A;
    std::vector<double> grad_p;
    std::optional<double> p;
    std::string profile;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "YAML run configuration")->check(CLI::ExistingFile);
    app->add_option("--out", f.out, "Output directory (default: config, then $MONOSOB_OUT, then ./reports)");
    app->add_option("--resolution", f.resolution, "Cells per axis (coarse run; the fine run doubles it)");
    app->add_option("--grid", f.grid, "Points of the geometric t-grid");
    app->add_option("--seed", f.seed, "Seed for randomized steps");
    app->add_option("--case", f.cases, "Case ids")->delimiter(',');
    app->add_option("--family", f.family, "Test function family tag");
    app->add_option("--param", f.params, "Family parameter NAME=VALUE (repeatable)");
    app->add_option("--space", f.space, "Space spec, e.g. lorentz:p=2,q=1");
    app->add_option("--A", f.A, "Weight exponents, comma separated")->delimiter(',');
    app->add_option("--grad-p", f.grad_p, "Per-coordinate gradient exponents")->delimiter(',');
    app->add_option("--p", f.p, "Scalar exponent p of the oscillation cases");
}

monosob::RunConfig build_config(const Flags& f) {
    monosob::RunConfig c = f.config.empty() ? monosob::RunConfig{} : monosob::load_config(f.config);
    if (!f.A.empty()) c.A = f.A;
    if (f.resolution) c.resolution = f.resolution;
    if (f.grid) c.grid = f.grid;
    if (f.seed) c.seed = *f.seed;
    if (!f.cases.empty()) c.cases = f.cases;
    if (!f.space.empty()) c.spaces = {f.space};
    if (!f.grad_p.empty()) c.p = f.grad_p;
    if (f.p) c.p_scalar = *f.p;
    if (!f.family.empty() || !f.params.empty()) {
        monosob::FamilySweep s;
        s.tag = f.family.empty() ? (c.families.empty() ? "cone" : c.families.front().tag) : f.family;
        for (const auto& kv : f.params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("--param expects NAME=VALUE, got '" + kv + "'");
            s.params[kv.substr(0, eq)] = {std::stod(kv.substr(eq + 1))};
        }
        c.families = {s};
    }
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monomial-weighted rearrangements and anisotropic Sobolev inequalities"};
    app.require_subcommand(1);
    Flags flags;
    auto* run = app.add_subcommand("run", "Run the case matrix of a configuration file");
    auto* verify = app.add_subcommand("verify", "Verify cases on one instance per family");
    auto* sweep = app.add_subcommand("sweep", "Verify cases over the full family parameter grids");
    auto* sharp = app.add_subcommand("sharpness", "Scaling exponent test and best-constant estimates");
    auto* rearr = app.add_subcommand("rearrange", "Print the decreasing rearrangement of one instance as CSV");
    auto* spaces = app.add_subcommand("spaces", "Evaluate one norm on one instance");
    for (auto* s : {run, verify, sweep, sharp, rearr, spaces}) add_common(s, flags);
    run->get_option("--config")->required();
    spaces->add_option("--profile", flags.profile, "Use the step profile step:c=C,a=A instead of a family");

    CLI11_PARSE(app, argc, argv);

    try {
        const monosob::RunConfig config = build_config(flags);
        const std::optional<std::string> out_flag =
            flags.out.empty() ? std::nullopt : std::optional<std::string>(flags.out);
        if (run->parsed() || verify->parsed() || sweep->parsed()) {
            const auto outcome =
                monosob::run_and_report(config, sweep->parsed(), monosob::resolve_output_dir(out_flag, config), std::cerr);
            return outcome.exit_code;
        }
        if (sharp->parsed()) return monosob::run_sharpness(config, monosob::resolve_output_dir(out_flag, config), std::cerr);
        if (rearr->parsed()) {
            monosob::write_rearrangement(config, std::cout);
            return 0;
        }
        if (spaces->parsed()) {
            if (flags.space.empty()) throw std::invalid_argument("spaces needs --space SPEC");
            const auto profile = flags.profile.empty() ? std::nullopt : std::optional<std::string>(flags.profile);
            const monosob::Integral v = monosob::evaluate_space(config, flags.space, profile);
            if (v.finite()) {
                std::cout << monosob::format_number(v.value) << "\n";
            } else {
                std::cout << "inf (" << v.divergence << ")\n";
            }
            return 0;
        }
    } catch (const monosob::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
