#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "toda/dynamics.hpp"

using namespace toda;

namespace {

Eigen::MatrixXd to_eigen(const DMatrix& m)
{
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

double max_diff(const DMatrix& a, const Eigen::MatrixXd& b)
{
    return (to_eigen(a) - b).cwiseAbs().maxCoeff();
}

CoefficientSet constant_coefficients(Case c, double v)
{
    CoefficientSet s = zero_coefficients(c);
    double k = 0;
    for (Side side : {Side::Minus, Side::Plus})
        for (const auto& n : coefficient_slots(c, side)) {
            s.f[n] = CoefficientFunction::constant(v * (1 + 0.25 * k));
            k += 1;
        }
    if (c == Case::G2_10) {
        s.f["c^3_2"] = CoefficientFunction::constant(0);
        s.f["cb^3_2"] = CoefficientFunction::constant(0);
    }
    return s;
}

std::map<std::string, Rational> exact_values(Case c, Side side)
{
    std::map<std::string, Rational> v;
    int k = 2;
    for (const auto& n : coefficient_slots(c))
        v[side == Side::Plus ? bar_name(n) : n] = Rational(k++, 3);
    return v;
}

RMatrix form(const Representation& r)
{
    RMatrix N(r.dim, r.dim);
    for (std::size_t i = 0; i < r.dim; ++i)
        N(i, i) = r.norms[i];
    return N;
}

} // namespace

TEST_CASE("coefficient functions")
{
    auto p = CoefficientFunction::polynomial({1, -2, 0.5});
    CHECK(p.value(2) == doctest::Approx(1 - 4 + 2));
    CHECK(p.derivative(2) == doctest::Approx(-2 + 2));
    auto t = CoefficientFunction::trig(0.5, 2, 3, 0.25);
    CHECK(t.value(0.1) == doctest::Approx(0.5 + 2 * std::sin(0.3 + 0.25)));
    CHECK(t.derivative(0.1) == doctest::Approx(6 * std::cos(0.3 + 0.25)));

    for (const auto& f : {p, t, CoefficientFunction::constant(0.1), CoefficientFunction::polynomial({1.0 / 3, 1e-17})}) {
        auto g = CoefficientFunction::parse(f.describe());
        CHECK(g.describe() == f.describe());
        CHECK(g.value(0.37) == f.value(0.37));
    }
    CHECK(CoefficientFunction::parse("poly:0,0").is_zero());
    CHECK_FALSE(CoefficientFunction::parse("trig:0,1,1,0").is_zero());
    CHECK_THROWS_AS(CoefficientFunction::parse("poly:"), InvalidParameter);
    CHECK_THROWS_AS(CoefficientFunction::parse("cubic:1,2"), InvalidParameter);
    CHECK_THROWS_AS(CoefficientFunction::parse("trig:1,2,3"), InvalidParameter);
    CHECK_THROWS_AS(CoefficientFunction::parse("poly:1,x"), InvalidParameter);
}

TEST_CASE("coefficient slots and draws")
{
    CHECK(bar_name("c1") == "cb1");
    CHECK(bar_name("d^2") == "db^2");
    CHECK(bar_name("c^3_1") == "cb^3_1");
    CHECK(coefficient_slots(Case::A2_10) == std::vector<std::string>{"c1", "c2"});
    CHECK(coefficient_slots(Case::G2_01, Side::Plus) == std::vector<std::string>{"db1", "db2", "db3", "db4", "db^2"});

    auto a = random_polynomial_coefficients(Case::G2_10, 5, 0.25);
    auto b = random_polynomial_coefficients(Case::G2_10, 5, 0.25);
    auto c = random_polynomial_coefficients(Case::G2_10, 6, 0.25);
    CHECK(a.at("c^2").describe() == b.at("c^2").describe());
    CHECK(a.at("c^2").describe() != c.at("c^2").describe());
    CHECK(a.at("c^3_2").is_zero());
    CHECK(a.at("cb^3_2").is_zero());
    for (const auto& [n, f] : a.f)
        for (double x : f.poly)
            CHECK(std::abs(x) <= 0.25);
    CHECK_THROWS_AS(a.at("nope"), InvalidParameter);
}

TEST_CASE("L operator words")
{
    auto s = zero_coefficients(Case::A2_10);
    auto Lp = build_l_operator(Case::A2_10, Side::Plus, s);
    auto Lm = build_l_operator(Case::A2_10, Side::Minus, s);
    REQUIRE(Lp.terms.size() == 2);
    CHECK(Lp.terms[0].slot == "cb1");
    CHECK(Lp.terms[1].slot == "cb2");
    CHECK(Lm.terms[0].slot == "c1");
    CHECK(Lp.terms[0].word.root() == std::array<int, 2>{1, 0});
    CHECK(Lp.terms[1].word.root() == std::array<int, 2>{1, 1});
    CHECK(Lm.terms[1].word.root() == std::array<int, 2>{-1, -1});

    CHECK(build_l_operator(Case::G2_10, Side::Plus, zero_coefficients(Case::G2_10), true).terms.size() == 4);
    CHECK(build_l_operator(Case::G2_10, Side::Plus, zero_coefficients(Case::G2_10), false).terms.size() == 5);
    CHECK(build_l_operator(Case::B2_01, Side::Minus, zero_coefficients(Case::B2_01)).terms[2].factor == Rational(1, 2));
    CHECK_THROWS_AS(build_l_operator(Case::B2_10, Side::Plus, s), InvalidParameter);
    CHECK_THROWS_AS(Lp.exact_at(make_algebra(1).rep(1), {}), InvalidParameter);
}

TEST_CASE("L+ words have positive grade, with grade one present")
{
    for (Case c : all_cases()) {
        const auto& ci = case_info(c);
        auto g = grading_operator(cartan_matrix(ci.p), ci.c);
        auto L = build_l_operator(c, Side::Plus, zero_coefficients(c), false);
        bool grade_one = false;
        for (const auto& t : L.terms) {
            int k = g.grade(t.word);
            CHECK(k >= 1);
            CHECK(k <= ci.max_grade);
            grade_one = grade_one || k == 1;
        }
        CHECK(grade_one);
    }
}

TEST_CASE("N L- = (L+)^T N with matching coefficient values")
{
    for (Case c : all_cases()) {
        auto a = make_algebra(case_info(c).p);
        auto Lp = build_l_operator(c, Side::Plus, zero_coefficients(c), false);
        auto Lm = build_l_operator(c, Side::Minus, zero_coefficients(c), false);
        for (int j = 1; j <= 2; ++j) {
            const auto& r = a.rep(j);
            RMatrix N = form(r);
            RMatrix P = Lp.exact_at(r, exact_values(c, Side::Plus));
            RMatrix M = Lm.exact_at(r, exact_values(c, Side::Minus));
            CHECK_FALSE(P.is_zero());
            CHECK(N * M == P.transpose() * N);
        }
    }
}

TEST_CASE("integrate_M: L = 0 gives the identity")
{
    auto a = make_algebra(3);
    auto L = build_l_operator(Case::G2_01, Side::Minus, zero_coefficients(Case::G2_01));
    auto M = integrate_M(a.rep(1), Side::Minus, {}, L, {0, 0.5, 1}, 1e-12);
    REQUIRE(M.size() == 3);
    for (const auto& g : M)
        CHECK(max_diff(g.M, Eigen::MatrixXd::Identity(7, 7)) == 0);
}

TEST_CASE("integrate_M: constant coefficients match exp(t L)")
{
    for (Case c : all_cases()) {
        auto a = make_algebra(case_info(c).p);
        auto s = constant_coefficients(c, 0.3);
        for (Side side : {Side::Minus, Side::Plus}) {
            auto L = build_l_operator(c, side, s);
            for (int j = 1; j <= 2; ++j) {
                const auto& r = a.rep(j);
                Eigen::MatrixXd Lm = to_eigen(L.at(L.word_matrices(r), 0));
                std::vector<double> ts{0, 0.25, 0.5, 1.0};
                auto M = integrate_M(r, side, {}, L, ts, 1e-12);
                for (std::size_t k = 0; k < ts.size(); ++k) {
                    Eigen::MatrixXd e = (ts[k] * Lm).exp();
                    CHECK(max_diff(M[k].M, e) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("integrate_M: commuting time-dependent L against the closed form")
{
    // A2 minus side with c1 = x, c2 = 1: X-1 and [X-1,X-2] commute, so
    // M(x) = exp(x²/2 X-1 + x [X-1,X-2]).
    auto a = make_algebra(1);
    auto s = zero_coefficients(Case::A2_10);
    s.f["c1"] = CoefficientFunction::polynomial({0, 1});
    s.f["c2"] = CoefficientFunction::constant(1);
    auto L = build_l_operator(Case::A2_10, Side::Minus, s);
    const auto& r = a.rep(1);
    auto w = L.word_matrices(r);
    REQUIRE(bracket(w[0], w[1]).is_zero());
    double previous = 1;
    for (double tol : {1e-6, 1e-8, 1e-10, 1e-12}) {
        auto M = integrate_M(r, Side::Minus, {}, L, {0, 1, 2}, tol);
        double err = 0;
        for (double x : {1.0, 2.0}) {
            Eigen::MatrixXd e = (x * x / 2 * to_eigen(w[0]) + x * to_eigen(w[1])).exp();
            err = std::max(err, max_diff(M[static_cast<std::size_t>(x)].M, e));
        }
        CHECK(err <= 10 * tol);
        CHECK(err <= previous * 1.01);
        previous = err;
    }
}

TEST_CASE("integrate_M: det M = 1 and the defining equation")
{
    auto a = make_algebra(2);
    auto s = random_polynomial_coefficients(Case::B2_10, 3, 0.5);
    const double x = 0.6, d = 1e-3;
    for (Side side : {Side::Minus, Side::Plus}) {
        auto L = build_l_operator(Case::B2_10, side, s);
        for (int j = 1; j <= 2; ++j) {
            const auto& r = a.rep(j);
            auto M = integrate_M(r, side, {}, L, {0, x - d, x, x + d}, 1e-13);
            CHECK(to_eigen(M[2].M).determinant() == doctest::Approx(1).epsilon(1e-11));
            Eigen::MatrixXd deriv = (to_eigen(M[3].M) - to_eigen(M[1].M)) / (2 * d);
            Eigen::MatrixXd Lx = to_eigen(L.at(L.word_matrices(r), x));
            Eigen::MatrixXd rhs = side == Side::Minus ? Eigen::MatrixXd(to_eigen(M[2].M) * Lx)
                                                      : Eigen::MatrixXd(Lx * to_eigen(M[2].M));
            CHECK((deriv - rhs).cwiseAbs().maxCoeff() < 1e-5);
        }
    }
}

TEST_CASE("integrate_M: input checks")
{
    auto a = make_algebra(1);
    auto L = build_l_operator(Case::A2_10, Side::Minus, zero_coefficients(Case::A2_10));
    CHECK_THROWS_AS(integrate_M(a.rep(1), Side::Minus, {}, L, {0, 1}, 0), InvalidParameter);
    CHECK_THROWS_AS(integrate_M(a.rep(1), Side::Minus, {}, L, {}, 1e-10), InvalidParameter);
    CHECK_THROWS_AS(integrate_M(a.rep(1), Side::Minus, {}, L, {0, 1, 0.5}, 1e-10), InvalidParameter);
    CHECK_THROWS_AS(integrate_M(a.rep(1), Side::Plus, {}, L, {0, 1}, 1e-10), InvalidParameter);
    CHECK_THROWS_AS(integrate_M(a.rep(1), Side::Minus, {}, L, {0, INFINITY}, 1e-10), InvalidParameter);
}

TEST_CASE("fields: trivial L and the origin")
{
    for (Case c : all_cases()) {
        auto a = make_algebra(case_info(c).p);
        Grid g;
        g.nx = g.ny = 5;
        auto f = generate_field(c, a, zero_coefficients(c), g);
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                auto u = f.u(i, j);
                CHECK(u(0, 0) == doctest::Approx(1));
                CHECK(u(0, 1) == doctest::Approx(0));
                CHECK(u(1, 0) == doctest::Approx(0));
                CHECK(u(1, 1) == doctest::Approx(1));
                CHECK_FALSE(f.singular[f.node(i, j)]);
                for (const auto& n : multiplet_channels(c))
                    CHECK(f.at(f.channel(n), i, j) == 0);
            }

        // K(0,0) = I: u = 1 and the multiplets reduce to bare coefficients
        auto s = random_polynomial_coefficients(c, 2, 0.25);
        auto h = generate_field(c, a, s, g);
        auto u = h.u(0, 0);
        CHECK(u(0, 0) == doctest::Approx(1));
        CHECK(u(1, 1) == doctest::Approx(1));
        CHECK(u(0, 1) == doctest::Approx(0));
        if (c == Case::B2_10) {
            CHECK(h.at(h.channel("p1"), 0, 0) == doctest::Approx(s.at("c2").value(0)));
            CHECK(h.at(h.channel("p2"), 0, 0) == doctest::Approx(s.at("c1").value(0)));
            CHECK(h.at(h.channel("pb1"), 0, 0) == doctest::Approx(s.at("cb2").value(0)));
        }
    }
    CHECK_THROWS_AS(SolutionField{}.channel("nope"), InvalidParameter);
}

TEST_CASE("B2(1,0) p1 recomputed from K")
{
    auto a = make_algebra(2);
    auto s = random_polynomial_coefficients(Case::B2_10, 4, 0.25);
    Grid g;
    g.nx = g.ny = 9;
    auto f = generate_field(Case::B2_10, a, s, g);
    auto Lm = build_l_operator(Case::B2_10, Side::Minus, s);
    auto Lp = build_l_operator(Case::B2_10, Side::Plus, s);
    const auto& r = a.rep(1);
    auto mm = integrate_M(r, Side::Minus, {}, Lm, g.xs(), 1e-12);
    auto mp = integrate_M(r, Side::Plus, {}, Lp, g.ys(), 1e-12);
    Eigen::MatrixXd F1 = to_eigen(to_double(r.lower(1)));
    for (int i : {2, 5, 8})
        for (int j : {1, 4, 8}) {
            Eigen::MatrixXd K = to_eigen(mp[static_cast<std::size_t>(j)].M) * to_eigen(mm[static_cast<std::size_t>(i)].M);
            double alpha1 = (K * F1)(0, 0) / K(0, 0);
            double x = g.x(i);
            double p1 = s.at("c2").value(x) + 2 * s.at("c^2").value(x) * alpha1;
            CHECK(f.at(f.channel("p1"), i, j) == doctest::Approx(p1).epsilon(1e-10));
        }
}

TEST_CASE("field CSV")
{
    auto a = make_algebra(1);
    Grid g;
    g.nx = g.ny = 3;
    auto f = generate_field(Case::A2_10, a, random_polynomial_coefficients(Case::A2_10, 1), g);
    std::ostringstream os;
    write_field_csv(os, f);
    auto text = os.str();
    CHECK(text.rfind("x,y,u11,u12,u21,u22,det,singular\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);
}
