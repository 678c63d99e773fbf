#include "monosob/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include "monosob/rearrangement.hpp"
#include "monosob/sharpness.hpp"
#include "monosob/space_catalog.hpp"
#include "monosob/sobolev_terms.hpp"
#include "monosob/weights.hpp"

namespace monosob {
namespace {

bool needs_space(const std::string& id) {
    return id.rfind("T23.", 0) == 0 || id.rfind("T43.", 0) == 0 || id == "T46.angle";
}

bool needs_weight(const std::string& id) {
    return id.rfind("T47.", 0) == 0 || id.rfind("Gamma.", 0) == 0 || id.rfind("GGamma.", 0) == 0;
}

std::vector<FamilySweep> families_or_default(const RunConfig& c) {
    if (!c.families.empty()) return c.families;
    return {FamilySweep{"cone", {}}};
}

ReportRow error_row(const std::string& id, const std::string& family, const std::string& space, const std::string& what) {
    ReportRow row;
    row.report.case_id = id;
    row.report.anchor = case_anchor(id);
    row.report.family = family;
    row.report.status = Status::anomaly;
    row.report.note = "error: " + what;
    row.report.lhs = row.report.rhs = row.report.ratio = row.report.stability = std::nan("");
    row.space = space;
    return row;
}

}  // namespace

std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag, const RunConfig& config) {
    if (flag && !flag->empty()) return *flag;
    if (!config.out.empty()) return config.out;
    if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
    return "reports";
}

TestFunction first_instance(const RunConfig& config) {
    const FamilySweep f = families_or_default(config).front();
    return instantiate(FamilySpec::defaults(parse_family(f.tag), config.A.size()), f.first());
}

std::vector<ReportRow> run_matrix(const RunConfig& config, bool sweep) {
    config.validate();
    std::vector<ReportRow> rows;
    if (config.cases.empty()) return rows;
    const MonomialWeight w(config.A);
    const std::size_t R = config.effective_resolution();
    const CaseParams base = config.case_params();

    for (const auto& fam : families_or_default(config)) {
        const FamilySpec spec = FamilySpec::defaults(parse_family(fam.tag), config.A.size());
        const std::vector<Parameters> instances = sweep ? fam.expand() : std::vector<Parameters>{fam.first()};
        for (const auto& params : instances) {
            const TestFunction f = instantiate(spec, params);
            const std::string label = f.label();
            std::optional<SobolevData> coarse, fine;
            std::string data_error;
            try {
                coarse = compute_sobolev_data(f, w, R, config.grid);
                fine = compute_sobolev_data(f, w, 2 * R, config.grid);
            } catch (const std::exception& e) {
                data_error = e.what();
            }
            for (const auto& id : config.cases) {
                std::vector<std::pair<std::string, CaseParams>> variants;
                if (needs_space(id)) {
                    for (const auto& s : config.spaces) {
                        CaseParams c = base;
                        c.space = SpaceSpec::parse(s);
                        variants.emplace_back(c.space->to_string(), c);
                    }
                    if (config.spaces.empty()) {
                        ReportRow row = error_row(id, label, "", "");
                        row.report.status = Status::refused;
                        row.report.note = "no base space configured";
                        rows.push_back(std::move(row));
                        continue;
                    }
                } else {
                    variants.emplace_back(needs_weight(id) ? base.weight.to_string() : std::string(), base);
                }
                for (const auto& [space, c] : variants) {
                    if (!data_error.empty()) {
                        rows.push_back(error_row(id, label, space, data_error));
                        continue;
                    }
                    try {
                        rows.push_back({verify_case(id, label, *coarse, *fine, c), space});
                    } catch (const std::exception& e) {
                        rows.push_back(error_row(id, label, space, e.what()));
                    }
                }
            }
        }
    }
    return rows;
}

int exit_status(const std::vector<ReportRow>& rows) {
    for (const auto& r : rows)
        if (r.report.status != Status::pass && r.report.status != Status::refused) return 1;
    return 0;
}

RunOutcome run_and_report(const RunConfig& config, bool sweep, const std::filesystem::path& out, std::ostream& log) {
    ensure_writable_dir(out);
    RunOutcome o;
    if (config.cases.empty()) log << "warning: empty case list, no rows produced\n";
    o.rows = run_matrix(config, sweep);
    o.csv = out / "report.csv";
    o.json = out / "report.json";
    write_text(o.csv, report_csv(o.rows));
    write_text(o.json, report_json(o.rows));
    o.exit_code = exit_status(o.rows);
    std::map<Status, std::size_t> counts;
    for (const auto& r : o.rows) ++counts[r.report.status];
    log << o.rows.size() << " rows:";
    for (const auto& [s, n] : counts) log << ' ' << to_string(s) << '=' << n;
    log << "\n";
    for (const auto& r : o.rows) {
        const auto& v = r.report;
        if (v.status == Status::pass || v.status == Status::refused) continue;
        log << "  " << to_string(v.status) << ": " << v.case_id << " on " << v.family
            << (r.space.empty() ? "" : " [" + r.space + "]") << " ratio=" << format_number(v.ratio)
            << " stability=" << format_number(v.stability) << (v.note.empty() ? "" : " (" + v.note + ")") << "\n";
    }
    log << "wrote " << o.csv.string() << " and " << o.json.string() << "\n";
    return o;
}

int run_sharpness(const RunConfig& config, const std::filesystem::path& out, std::ostream& log) {
    config.validate();
    ensure_writable_dir(out);
    const MonomialWeight w(config.A);
    const TestFunction f = first_instance(config);
    std::vector<double> p = config.p.empty() ? std::vector<double>(config.A.size(), 1.0) : config.p;
    const double pbar = harmonic_mean_exponent(config.A, p);
    const auto pstar = sobolev_exponent(pbar, w.homogeneous_dimension());
    std::vector<double> qs = config.sharpness.q_candidates;
    if (qs.empty() && pstar) qs = {*pstar * 0.9, *pstar, *pstar * 1.1};

    int code = 0;
    const auto lambdas = default_lambda_grid(config.sharpness.lambda_lo_decade, config.sharpness.lambda_hi_decade,
                                             config.sharpness.lambda_samples);
    const ScalingResult sr = scaling_exponent_test(f, w, p, qs, lambdas, config.effective_resolution(), config.grid);
    write_text(out / "scaling.csv", scaling_csv(sr));
    for (const auto& c : sr.candidates) {
        if (c.skipped) {
            log << "q=" << format_number(c.q) << " skipped: " << c.note << "\n";
            continue;
        }
        const bool expected = pstar && std::abs(c.q - *pstar) <= 1e-12 * *pstar;
        log << "q=" << format_number(c.q) << " slope=" << format_number(c.isotropic_slope)
            << " oracle=" << format_number(c.isotropic_oracle) << (c.invariant ? " invariant" : " not invariant") << "\n";
        if (c.invariant != expected) code = 1;
    }

    std::vector<ConstantEstimate> estimates;
    EstimateBudget budget;
    budget.grid_points = config.sharpness.grid_points;
    budget.refine_evaluations = config.sharpness.refine_evaluations;
    budget.resolution = std::max<std::size_t>(8, config.effective_resolution() / 4);
    budget.grid_size = std::min<std::size_t>(config.grid, 1024);
    budget.seed = config.seed;
    const CaseParams cp = config.case_params();
    for (const auto& fam : families_or_default(config)) {
        const FamilySpec spec = FamilySpec::defaults(parse_family(fam.tag), config.A.size());
        for (const auto& id : config.cases) {
            const ConstantEstimate e = estimate_best_constant(id, spec, w, cp, budget, fam.first());
            log << id << " on " << fam.tag << ": best ratio " << format_number(e.best_ratio) << " after "
                << e.trace_length << " evaluations" << (e.flagged ? " (no improvement over the grid)" : "") << "\n";
            estimates.push_back(e);
        }
    }
    write_text(out / "constants.csv", constants_csv(estimates));
    write_text(out / "constants.json", constants_json(estimates));
    log << "wrote " << (out / "scaling.csv").string() << ", " << (out / "constants.csv").string() << "\n";
    return code;
}

void write_rearrangement(const RunConfig& config, std::ostream& os) {
    config.validate();
    const MonomialWeight w(config.A);
    const TestFunction f = first_instance(config);
    rearrange(w, f.value, f.support, config.effective_resolution(), config.grid).write_csv(os);
}

Integral evaluate_space(const RunConfig& config, const std::string& space, const std::optional<std::string>& profile) {
    const SpaceSpec spec = SpaceSpec::parse(space);
    if (profile) {
        const std::string& s = *profile;
        if (s.rfind("step:", 0) != 0) throw std::invalid_argument("profile must read step:c=C,a=A");
        double c = 1.0, a = 1.0;
        std::stringstream ss(s.substr(5));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("profile entry '" + item + "' is not key=value");
            const std::string k = item.substr(0, eq);
            const double v = std::stod(item.substr(eq + 1));
            if (k == "c") c = v;
            else if (k == "a") a = v;
            else throw std::invalid_argument("unknown step parameter '" + k + "' (valid: c, a)");
        }
        return norm(spec, MonotoneProfile::step(c, a, config.grid));
    }
    config.validate();
    const MonomialWeight w(config.A);
    const TestFunction f = first_instance(config);
    return norm(spec, rearrange(w, f.value, f.support, config.effective_resolution(), config.grid));
}

}  // namespace monosob
