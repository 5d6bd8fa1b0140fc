#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toda/dynamics.hpp"
#include "toda/grading.hpp"

namespace toda {

// Resolved run configuration. Text form: one `key = value` per line, `#`
// starts a comment, unknown keys are an error. Keys:
//   command        reps | identities | solve-verify | report
//   p              1, 2, 3 (algebra; implied by case)
//   grading        c-vector "1,0" or "0,1" (implied by case)
//   case           A2_10 | B2_10 | B2_01 | G2_01 | G2_10 (or A2(1,0), ...)
//   seed           base seed for every random draw
//   seeds          number of group elements for the identity suite
//   word_length    factors per sampled group element
//   g2_line_checks true | false (G2 line-component and Det₃ relations, p = 3)
//   coef_scale     amplitude of the seeded polynomial coefficients
//   coef.<slot>    explicit coefficient, e.g. coef.cb1 = poly:0.1,0.2
//   coefficients   seeded | zero (fills slots not given explicitly)
//   gauge_c3_2_zero true | false (G2(1,0))
//   rect           x0,x1,y0,y1
//   grid           finest node count per side (odd)
//   levels         spacing-ladder length, each level halves h
//   tol            integrator tolerance
//   stencil        2 | 4
//   threshold      residual pass threshold at the finest spacing
//   calibration_seeds  coefficient draws per calibration question
//   out            output directory
struct RunConfig {
    std::string command = "solve-verify";
    int p = 1;
    std::array<int, 2> grading{1, 0};
    std::uint64_t seed = 1;
    int seeds = 100;
    int word_length = 6;
    bool g2_line_checks = true;
    double coef_scale = kDefaultCoefficientScale;
    std::string coefficients = "seeded";
    std::map<std::string, std::string> coef; // slot -> descriptor
    bool gauge_c3_2_zero = true;
    std::array<double, 4> rect{0, 1, 0, 1};
    int grid = 65;
    int levels = 3;
    double tol = 1e-12;
    int stencil = 4;
    double threshold = 1e-6;
    int calibration_seeds = 3;
    std::string out = "out";

    Case case_id() const; // from p and grading
    void set_case(Case c);
    std::vector<int> ladder() const; // node counts, coarse to fine
    CoefficientSet coefficient_set() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// apply one key = value assignment (same validation as the file form)
void set_config_value(RunConfig& c, const std::string& key, const std::string& value);
void validate(const RunConfig& c);
// text form that parses back to the same configuration
std::string to_config_text(const RunConfig& c);
std::string manifest_json(const RunConfig& c);

} // namespace toda
