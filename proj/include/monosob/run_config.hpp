#pragma once

// Run configuration, read from YAML. Keys mirror the field names:
//
//   A: [2]
//   resolution: 4096        # cells per axis; 0 picks a per-dimension default
//   grid: 4096
//   cases: [T32.i, T32.ii]
//   families:
//     - tag: cone
//       params: {R: [0.5, 1, 2]}
//   spaces: ["lorentz:p=2,q=1"]
//   p: [1]                  # gradient exponents, one per coordinate
//   q: [1]
//   p_scalar: 1
//   m: 2
//   weight: "t^0.5"
//   seed: 1
//   out: reports

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "monosob/inequality_verifier.hpp"
#include "monosob/test_functions.hpp"

namespace monosob {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, int line, const std::string& message);
    const std::string& path() const { return path_; }
    int line() const { return line_; }

private:
    std::string path_;
    int line_;
};

struct FamilySweep {
    std::string tag;
    std::map<std::string, std::vector<double>> params;

    /// First value of every parameter.
    Parameters first() const;
    /// Cartesian product, last key varying fastest.
    std::vector<Parameters> expand() const;
};

struct SharpnessSettings {
    std::vector<double> q_candidates;  // empty: pbar* (1 - 0.1), pbar*, pbar* (1 + 0.1)
    double lambda_lo_decade = -1.0;
    double lambda_hi_decade = 1.0;
    std::size_t lambda_samples = 9;
    std::size_t grid_points = 3;
    std::size_t refine_evaluations = 200;
};

struct RunConfig {
    std::vector<double> A{0.0};
    std::size_t resolution = 0;
    std::size_t grid = 4096;
    std::vector<std::string> cases;
    std::vector<FamilySweep> families;
    std::vector<std::string> spaces;
    std::vector<double> p;
    std::vector<double> q;
    double p_scalar = 1.0;
    double m = 2.0;
    std::string weight = "constant";
    std::uint64_t seed = 1;
    std::string out;  // empty: see resolve_output_dir
    SharpnessSettings sharpness;

    /// Rejects unknown case ids, family tags, space specs and parameters,
    /// listing the valid options.
    void validate() const;
    std::size_t effective_resolution() const;
    CaseParams case_params() const;
};

/// Per-axis cell count giving desk-scale run times in dimension n.
std::size_t default_resolution(std::size_t n);

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& path = "<string>");

}  // namespace monosob
