#include "toda/grading.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace toda {

namespace {

const std::vector<CaseInfo>& case_table()
{
    static const std::vector<CaseInfo> t = {
        {Case::A2_10, "A2(1,0)", "A2_10", 1, {1, 0}, 1},
        {Case::B2_10, "B2(1,0)", "B2_10", 2, {1, 0}, 2},
        {Case::B2_01, "B2(0,1)", "B2_01", 2, {0, 1}, 1},
        {Case::G2_01, "G2(0,1)", "G2_01", 3, {0, 1}, 2},
        {Case::G2_10, "G2(1,0)", "G2_10", 3, {1, 0}, 3},
    };
    return t;
}

// Row-reduced set of flattened matrices, for exact independence tests.
class Span {
public:
    bool add(std::vector<Rational> v)
    {
        for (const auto& [pivot, row] : rows_)
            if (v[pivot] != 0) {
                Rational f = v[pivot] / row[pivot];
                for (std::size_t k = 0; k < v.size(); ++k)
                    v[k] -= f * row[k];
            }
        auto it = std::find_if(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
        if (it == v.end())
            return false;
        std::size_t pivot = static_cast<std::size_t>(it - v.begin());
        for (auto& [p, row] : rows_)
            if (row[pivot] != 0) {
                Rational f = row[pivot] / v[pivot];
                for (std::size_t k = 0; k < v.size(); ++k)
                    row[k] -= f * v[k];
            }
        rows_.emplace_back(pivot, std::move(v));
        return true;
    }

private:
    std::vector<std::pair<std::size_t, std::vector<Rational>>> rows_;
};

} // namespace

const CaseInfo& case_info(Case c)
{
    for (const auto& ci : case_table())
        if (ci.id == c)
            return ci;
    throw InvalidParameter("unknown case");
}

const std::vector<Case>& all_cases()
{
    static const std::vector<Case> v = {Case::A2_10, Case::B2_10, Case::B2_01, Case::G2_01, Case::G2_10};
    return v;
}

Case parse_case(const std::string& key)
{
    for (const auto& ci : case_table())
        if (ci.key == key || ci.name == key)
            return ci.id;
    throw InvalidParameter("unknown grading case '" + key + "'");
}

int GradingSpec::grade(const GenExpr& e) const
{
    auto r = e.root();
    return r[0] * c[0] + r[1] * c[1];
}

RMatrix GradingSpec::operator_in(const Representation& r) const
{
    return s[0] * r.cartan(1) + s[1] * r.cartan(2);
}

GradingSpec grading_operator(const CartanData& cd, std::array<int, 2> c)
{
    for (int ci : c)
        if (ci != 0 && ci != 1)
            throw InvalidParameter("grading vector entries must be 0 or 1");
    if (c[0] == 0 && c[1] == 0)
        throw InvalidParameter("trivial grading c=(0,0)");
    GradingSpec g;
    g.c = c;
    // sum_i s_i K[j][i] = c_j, i.e. s = K^{-1} c with K acting as K[j][i] s_i
    const auto& K = cd.K;
    Rational det = K[0][0] * K[1][1] - K[0][1] * K[1][0];
    g.s[0] = Rational(c[0] * K[1][1] - K[0][1] * c[1]) / det;
    g.s[1] = Rational(K[0][0] * c[1] - c[0] * K[1][0]) / det;
    for (int i = 1; i <= 2; ++i) {
        g.grades["X+" + std::to_string(i)] = c[i - 1];
        g.grades["X-" + std::to_string(i)] = -c[i - 1];
        if (c[i - 1] == 0)
            g.red_roots.push_back(i);
    }
    return g;
}

std::vector<GradedComponent> graded_decomposition(const Representation& r, const GradingSpec& g)
{
    std::map<int, std::vector<GenExpr>> by_grade;
    for (bool raising : {true, false}) {
        Span span;
        std::vector<std::vector<int>> layer;
        for (int i = 1; i <= 2; ++i) {
            auto m = evaluate(left_normed({i}, raising), r);
            if (span.add(m.data()))
                layer.push_back({i});
        }
        while (!layer.empty()) {
            std::vector<std::vector<int>> next;
            for (const auto& w : layer) {
                GenExpr e = left_normed(w, raising);
                by_grade[g.grade(e)].push_back(e);
                for (int i = 1; i <= 2; ++i) {
                    auto w2 = w;
                    w2.push_back(i);
                    auto m = evaluate(left_normed(w2, raising), r);
                    if (!m.is_zero() && span.add(m.data()))
                        next.push_back(w2);
                }
            }
            layer = std::move(next);
        }
    }
    std::vector<GradedComponent> out;
    for (auto& [grade, words] : by_grade)
        out.push_back({grade, std::move(words)});
    return out;
}

std::optional<std::vector<BasisWord>> u_basis(const Representation& r, const GradingSpec& g)
{
    if (g.red_roots.empty())
        return std::nullopt;
    if (g.red_roots.size() != 1)
        throw InvalidParameter("u_basis needs exactly one red root");
    const int red = g.red_roots[0];
    std::vector<BasisWord> out;
    std::vector<int> word;
    for (;;) {
        int k = r.find(word);
        if (k < 0)
            break;
        out.push_back(r.basis[static_cast<std::size_t>(k)]);
        word.push_back(red);
    }
    return out;
}

} // namespace toda
