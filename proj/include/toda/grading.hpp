#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toda/algebra.hpp"
#include "toda/generators.hpp"

namespace toda {

// The five nonabelian rank-2 systems.
enum class Case { A2_10, B2_10, B2_01, G2_01, G2_10 };

struct CaseInfo {
    Case id;
    std::string name; // "A2(1,0)"
    std::string key;  // "A2_10", used in configs and file names
    int p;
    std::array<int, 2> c;
    int max_grade;
};

const CaseInfo& case_info(Case c);
const std::vector<Case>& all_cases();
Case parse_case(const std::string& key); // accepts key or name

struct GradingSpec {
    std::array<int, 2> c{};
    std::array<Rational, 2> s;
    std::map<std::string, int> grades; // "X+1" -> 1, ...
    std::vector<int> red_roots;

    int grade(const GenExpr& e) const;
    RMatrix operator_in(const Representation& r) const; // H = s1 h1 + s2 h2
};

GradingSpec grading_operator(const CartanData& cd, std::array<int, 2> c);

struct GradedComponent {
    int grade;
    std::vector<GenExpr> words;
};

// Left-normed multi-commutators up to the height of the algebra, a maximal
// independent set per root space, grouped by grade (ascending).
std::vector<GradedComponent> graded_decomposition(const Representation& r, const GradingSpec& g);

// Grade-0 orbit of the highest vector under the red root; nullopt when the
// grading has no red root.
std::optional<std::vector<BasisWord>> u_basis(const Representation& r, const GradingSpec& g);

} // namespace toda
