#include "doctest.h"

#include "toda/grading.hpp"

using namespace toda;

TEST_CASE("grading operator coefficients")
{
    auto g = grading_operator(cartan_matrix(1), {1, 1});
    CHECK(g.s[0] == 1);
    CHECK(g.s[1] == 1);
    CHECK(g.grades.at("X+1") == 1);
    CHECK(g.grades.at("X+2") == 1);
    CHECK(g.red_roots.empty());

    auto b = grading_operator(cartan_matrix(2), {1, 0});
    CHECK(b.grades.at("X+1") == 1);
    CHECK(b.grades.at("X+2") == 0);
    CHECK(b.red_roots == std::vector<int>{2});

    auto gg = grading_operator(cartan_matrix(3), {0, 1});
    CHECK(gg.grades.at("X+2") == 1);
    CHECK(gg.grades.at("X-1") == 0);

    CHECK_THROWS_AS(grading_operator(cartan_matrix(1), {0, 0}), InvalidParameter);
    CHECK_THROWS_AS(grading_operator(cartan_matrix(1), {2, 0}), InvalidParameter);
}

TEST_CASE("[H, X±_j] = ±c_j X±_j in every representation")
{
    for (Case c : all_cases()) {
        const auto& ci = case_info(c);
        auto cd = cartan_matrix(ci.p);
        auto g = grading_operator(cd, ci.c);
        for (int j = 1; j <= 2; ++j) {
            auto r = build_fundamental_rep(cd, j);
            RMatrix H = g.operator_in(r);
            for (int i = 1; i <= 2; ++i) {
                CHECK(bracket(H, r.raise(i)) == Rational(ci.c[i - 1]) * r.raise(i));
                CHECK(bracket(H, r.lower(i)) == Rational(-ci.c[i - 1]) * r.lower(i));
            }
        }
    }
}

TEST_CASE("graded decomposition")
{
    for (Case c : all_cases()) {
        const auto& ci = case_info(c);
        auto cd = cartan_matrix(ci.p);
        auto g = grading_operator(cd, ci.c);
        auto r = build_fundamental_rep(cd, 1);
        auto dec = graded_decomposition(r, g);
        CHECK(dec.back().grade == ci.max_grade);
        CHECK(dec.front().grade == -ci.max_grade);
        RMatrix H = g.operator_in(r);
        std::size_t count = 0;
        for (const auto& comp : dec)
            for (const auto& w : comp.words) {
                ++count;
                RMatrix m = evaluate(w, r);
                CHECK(bracket(H, m) == Rational(comp.grade) * m);
                CHECK(g.grade(w) == comp.grade);
            }
        // number of roots: 6, 8, 12
        CHECK(count == std::size_t(ci.p == 1 ? 6 : ci.p == 2 ? 8 : 12));

        // grade-0 words close under bracket: the bracket of two grade-0 root
        // vectors has grade 0 (it is zero or a Cartan element at rank 2)
        for (const auto& comp : dec)
            if (comp.grade == 0)
                for (const auto& a : comp.words)
                    for (const auto& b : comp.words)
                        CHECK(bracket(H, bracket(evaluate(a, r), evaluate(b, r))).is_zero());
    }
}

TEST_CASE("A2(1,0) grade-1 subspace is spanned by X1 and [X2,X1]")
{
    auto cd = cartan_matrix(1);
    auto g = grading_operator(cd, {1, 0});
    auto r = build_fundamental_rep(cd, 2);
    for (const auto& comp : graded_decomposition(r, g))
        if (comp.grade == 1) {
            REQUIRE(comp.words.size() == 2);
            RMatrix x1 = r.raise(1);
            RMatrix x21 = bracket(r.raise(2), r.raise(1));
            for (const auto& w : comp.words) {
                RMatrix m = evaluate(w, r);
                bool ok = m == x1 || m == -x1 || m == x21 || m == -x21;
                CHECK(ok);
            }
        }
}

TEST_CASE("u_basis")
{
    auto basis_strs = [](Case c, int j) {
        const auto& ci = case_info(c);
        auto cd = cartan_matrix(ci.p);
        auto r = build_fundamental_rep(cd, j);
        auto u = u_basis(r, grading_operator(cd, ci.c));
        std::vector<std::string> out;
        for (const auto& b : *u)
            out.push_back(b.str());
        return out;
    };
    CHECK(basis_strs(Case::A2_10, 2) == std::vector<std::string>{"()", "(2)"});
    CHECK(basis_strs(Case::B2_10, 2) == std::vector<std::string>{"()", "(2)"});
    CHECK(basis_strs(Case::B2_01, 1) == std::vector<std::string>{"()", "(1)"});
    CHECK(basis_strs(Case::G2_01, 1) == std::vector<std::string>{"()", "(1)"});
    CHECK(basis_strs(Case::G2_10, 2) == std::vector<std::string>{"()", "(2)"});

    auto cd = cartan_matrix(1);
    auto r = build_fundamental_rep(cd, 1);
    CHECK_FALSE(u_basis(r, grading_operator(cd, {1, 1})).has_value());
}

TEST_CASE("case table")
{
    CHECK(parse_case("G2_10") == Case::G2_10);
    CHECK(parse_case("B2(0,1)") == Case::B2_01);
    CHECK_THROWS_AS(parse_case("C3"), InvalidParameter);
}
