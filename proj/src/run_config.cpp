#include "monosob/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "monosob/space_catalog.hpp"
#include "monosob/weights.hpp"

namespace monosob {
namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
}

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

struct Reader {
    std::string path;

    [[noreturn]] void fail(const YAML::Node& n, const std::string& msg) const { throw ConfigError(path, line_of(n), msg); }

    template <class T>
    T scalar(const YAML::Node& n, const std::string& key) const {
        if (!n.IsScalar()) fail(n, "'" + key + "' must be a scalar");
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail(n, "'" + key + "' has an invalid value '" + n.Scalar() + "'");
        }
    }

    std::vector<double> numbers(const YAML::Node& n, const std::string& key) const {
        std::vector<double> out;
        if (n.IsScalar()) {
            out.push_back(scalar<double>(n, key));
        } else if (n.IsSequence()) {
            for (const auto& x : n) out.push_back(scalar<double>(x, key));
        } else if (!n.IsNull()) {
            fail(n, "'" + key + "' must be a number or a list of numbers");
        }
        return out;
    }

    std::vector<std::string> strings(const YAML::Node& n, const std::string& key) const {
        std::vector<std::string> out;
        if (n.IsScalar()) {
            out.push_back(n.Scalar());
        } else if (n.IsSequence()) {
            for (const auto& x : n) out.push_back(scalar<std::string>(x, key));
        } else if (!n.IsNull()) {
            fail(n, "'" + key + "' must be a string or a list of strings");
        }
        return out;
    }
};

const std::set<std::string> kTopKeys = {"A", "resolution", "grid", "cases", "families", "spaces", "p", "q",
                                        "p_scalar", "m", "weight", "seed", "out", "sharpness"};
const std::set<std::string> kSharpnessKeys = {"q_candidates", "lambda_lo_decade", "lambda_hi_decade",
                                              "lambda_samples", "grid_points", "refine_evaluations"};

std::string key_list(const std::set<std::string>& keys) {
    return join(std::vector<std::string>(keys.begin(), keys.end()));
}

}  // namespace

ConfigError::ConfigError(std::string path, int line, const std::string& message)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + message), path_(std::move(path)), line_(line) {}

Parameters FamilySweep::first() const {
    Parameters p;
    for (const auto& [k, v] : params)
        if (!v.empty()) p[k] = v.front();
    return p;
}

std::vector<Parameters> FamilySweep::expand() const {
    std::vector<Parameters> out{Parameters{}};
    for (const auto& [k, values] : params) {
        if (values.empty()) continue;
        std::vector<Parameters> next;
        for (const auto& base : out)
            for (double v : values) {
                Parameters p = base;
                p[k] = v;
                next.push_back(std::move(p));
            }
        out = std::move(next);
    }
    return out;
}

std::size_t default_resolution(std::size_t n) {
    switch (n) {
        case 1: return 4096;
        case 2: return 128;
        default: return 64;
    }
}

std::size_t RunConfig::effective_resolution() const {
    return resolution > 0 ? resolution : default_resolution(A.size());
}

CaseParams RunConfig::case_params() const {
    CaseParams c;
    c.p = p;
    c.q = q;
    c.p_scalar = p_scalar;
    c.m = m;
    c.weight = WeightFunction::parse(weight);
    if (!spaces.empty()) c.space = SpaceSpec::parse(spaces.front());
    return c;
}

void RunConfig::validate() const {
    MonomialWeight w(A);
    if (A.empty() || A.size() > kMaxDimension)
        throw std::invalid_argument("A needs between 1 and " + std::to_string(kMaxDimension) + " entries");
    if (grid < 16) throw std::invalid_argument("grid must hold at least 16 points");
    for (const auto& id : cases)
        if (!is_case_id(id)) throw std::invalid_argument("unknown case id '" + id + "' (valid: " + join(case_ids()) + ")");
    for (const auto& f : families) {
        const FamilySpec spec = FamilySpec::defaults(parse_family(f.tag), A.size());
        for (const auto& [k, values] : f.params) {
            const ParameterRange* r = spec.range(k);
            if (!r) {
                std::vector<std::string> names;
                for (const auto& b : spec.box) names.push_back(b.name);
                throw std::invalid_argument("unknown parameter '" + k + "' of family " + f.tag + " (valid: " +
                                            join(names) + ")");
            }
            for (double v : values)
                if (!(v >= r->lo && v <= r->hi))
                    throw std::invalid_argument("parameter " + k + " = " + std::to_string(v) + " outside [" +
                                                std::to_string(r->lo) + ", " + std::to_string(r->hi) + "]");
        }
    }
    for (const auto& s : spaces) SpaceSpec::parse(s).validate();
    if (!p.empty() && p.size() != A.size()) throw std::invalid_argument("p needs one entry per coordinate");
    if (!q.empty() && q.size() != A.size()) throw std::invalid_argument("q needs one entry per coordinate");
    WeightFunction::parse(weight);
    if (!(p_scalar >= 1.0) || !std::isfinite(p_scalar)) throw std::invalid_argument("p_scalar must satisfy 1 <= p < inf");
    if (!(m >= 1.0) || !std::isfinite(m)) throw std::invalid_argument("m must satisfy 1 <= m < inf");
    if (sharpness.lambda_samples < 8) throw std::invalid_argument("sharpness.lambda_samples must be at least 8");
    if (sharpness.lambda_hi_decade - sharpness.lambda_lo_decade < 2.0)
        throw std::invalid_argument("the lambda grid must span at least two decades");
}

RunConfig parse_config(const std::string& text, const std::string& path) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(path, e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
    }
    const Reader rd{path};
    RunConfig c;
    if (root.IsNull()) return c;
    if (!root.IsMap()) rd.fail(root, "top level must be a mapping");
    for (const auto& kv : root) {
        const std::string key = kv.first.Scalar();
        const YAML::Node& v = kv.second;
        if (!kTopKeys.count(key)) rd.fail(kv.first, "unknown key '" + key + "' (valid: " + key_list(kTopKeys) + ")");
        if (key == "A") c.A = rd.numbers(v, key);
        else if (key == "resolution") c.resolution = rd.scalar<std::size_t>(v, key);
        else if (key == "grid") c.grid = rd.scalar<std::size_t>(v, key);
        else if (key == "cases") c.cases = rd.strings(v, key);
        else if (key == "spaces") c.spaces = rd.strings(v, key);
        else if (key == "p") c.p = rd.numbers(v, key);
        else if (key == "q") c.q = rd.numbers(v, key);
        else if (key == "p_scalar") c.p_scalar = rd.scalar<double>(v, key);
        else if (key == "m") c.m = rd.scalar<double>(v, key);
        else if (key == "weight") c.weight = rd.scalar<std::string>(v, key);
        else if (key == "seed") c.seed = rd.scalar<std::uint64_t>(v, key);
        else if (key == "out") c.out = rd.scalar<std::string>(v, key);
        else if (key == "families") {
            if (!v.IsSequence()) rd.fail(v, "'families' must be a list");
            for (const auto& f : v) {
                FamilySweep s;
                if (f.IsScalar()) {
                    s.tag = f.Scalar();
                } else if (f.IsMap()) {
                    if (!f["tag"]) rd.fail(f, "family entry needs a 'tag'");
                    s.tag = rd.scalar<std::string>(f["tag"], "tag");
                    if (const auto ps = f["params"]) {
                        if (!ps.IsMap()) rd.fail(ps, "'params' must be a mapping");
                        for (const auto& p : ps) s.params[p.first.Scalar()] = rd.numbers(p.second, p.first.Scalar());
                    }
                } else {
                    rd.fail(f, "family entry must be a tag or a mapping");
                }
                try {
                    parse_family(s.tag);
                } catch (const std::invalid_argument& e) {
                    rd.fail(f, e.what());
                }
                c.families.push_back(std::move(s));
            }
        } else if (key == "sharpness") {
            if (!v.IsMap()) rd.fail(v, "'sharpness' must be a mapping");
            for (const auto& s : v) {
                const std::string k = s.first.Scalar();
                if (!kSharpnessKeys.count(k))
                    rd.fail(s.first, "unknown key 'sharpness." + k + "' (valid: " + key_list(kSharpnessKeys) + ")");
                if (k == "q_candidates") c.sharpness.q_candidates = rd.numbers(s.second, k);
                else if (k == "lambda_lo_decade") c.sharpness.lambda_lo_decade = rd.scalar<double>(s.second, k);
                else if (k == "lambda_hi_decade") c.sharpness.lambda_hi_decade = rd.scalar<double>(s.second, k);
                else if (k == "lambda_samples") c.sharpness.lambda_samples = rd.scalar<std::size_t>(s.second, k);
                else if (k == "grid_points") c.sharpness.grid_points = rd.scalar<std::size_t>(s.second, k);
                else c.sharpness.refine_evaluations = rd.scalar<std::size_t>(s.second, k);
            }
        }
        try {
            if (key == "cases")
                for (const auto& id : c.cases)
                    if (!is_case_id(id)) throw std::invalid_argument("unknown case id '" + id + "' (valid: " + join(case_ids()) + ")");
            if (key == "spaces")
                for (const auto& s : c.spaces) SpaceSpec::parse(s).validate();
            if (key == "weight") WeightFunction::parse(c.weight);
            if (key == "A") MonomialWeight{c.A};
        } catch (const std::invalid_argument& e) {
            rd.fail(v, e.what());
        }
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, 0, e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot read configuration file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace monosob
