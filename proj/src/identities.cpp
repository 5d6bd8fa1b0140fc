#include "toda/identities.hpp"

#include <fmt/format.h>

#include <random>

#include "toda/multiplets.hpp"

namespace toda {

const Representation& Algebra::rep(int j) const
{
    if (j != 1 && j != 2)
        throw InvalidParameter(fmt::format("representation label must be 1 or 2 (got {})", j));
    return fund[static_cast<std::size_t>(j - 1)];
}

Algebra make_algebra(int p)
{
    Algebra a;
    a.cd = cartan_matrix(p);
    a.fund = {build_fundamental_rep(a.cd, 1), build_fundamental_rep(a.cd, 2)};
    return a;
}

namespace {

struct Factor {
    int gen; // 0..3 = E1, E2, F1, F2
    Rational t;
};

std::vector<Factor> sample_factors(std::uint64_t seed, int length)
{
    static const Rational params[8] = {Rational(1), Rational(-1), Rational(1, 2), Rational(-1, 2),
                                       Rational(1, 3), Rational(-1, 3), Rational(2), Rational(-2)};
    std::mt19937_64 rng(seed);
    std::vector<Factor> out;
    for (int k = 0; k < length; ++k) {
        int gen = static_cast<int>(rng() % 4);
        int par = static_cast<int>(rng() % 8);
        out.push_back({gen, params[par]});
    }
    return out;
}

const char* gen_name(int g)
{
    static const char* names[4] = {"E1", "E2", "F1", "F2"};
    return names[g];
}

} // namespace

GroupElement<Rational> sample_group_element(const Representation& r, std::uint64_t seed, int length)
{
    if (length < 0)
        throw InvalidParameter("sample_group_element: negative length");
    GroupElement<Rational> g;
    g.rep = &r;
    g.M = RMatrix::identity(r.dim);
    std::string prov;
    for (const auto& f : sample_factors(seed, length)) {
        const RMatrix& X = f.gen < 2 ? r.E[f.gen] : r.F[f.gen - 2];
        g.M = g.M * nilpotent_exp(RMatrix(f.t * X));
        prov += fmt::format("{}exp({}*{})", prov.empty() ? "" : "·", f.t.get_str(), gen_name(f.gen));
    }
    g.provenance = prov.empty() ? "I" : prov;
    return g;
}

GroupPair<Rational> sample_group_pair(const Algebra& a, std::uint64_t seed, int length)
{
    return {{sample_group_element(a.fund[0], seed, length), sample_group_element(a.fund[1], seed, length)}};
}

RMatrix torus_element(const Representation& r, const Rational& l1, const Rational& l2)
{
    RMatrix d(r.dim, r.dim);
    for (std::size_t a = 0; a < r.dim; ++a) {
        const auto& w = r.basis[a].weight;
        if (w[0].get_den() != 1 || w[1].get_den() != 1)
            throw InvalidParameter("torus_element: non-integral weight");
        d(a, a) = ipow(l1, static_cast<int>(w[0].get_num().get_si())) *
                  ipow(l2, static_cast<int>(w[1].get_num().get_si()));
    }
    return d;
}

std::vector<Rational> bra_vector(const Representation& r, const Word& raising)
{
    std::vector<Rational> v(r.dim, Rational(0));
    v[0] = 1;
    for (int i : raising) {
        const RMatrix& E = r.raise(i);
        std::vector<Rational> w(r.dim, Rational(0));
        for (std::size_t a = 0; a < r.dim; ++a)
            if (v[a] != 0)
                for (std::size_t b = 0; b < r.dim; ++b)
                    if (E(a, b) != 0)
                        w[b] += v[a] * E(a, b);
        v = std::move(w);
    }
    return v;
}

std::vector<Rational> ket_vector(const Representation& r, const Word& lowering)
{
    std::vector<Rational> v(r.dim, Rational(0));
    v[0] = 1;
    for (auto it = lowering.rbegin(); it != lowering.rend(); ++it) {
        const RMatrix& F = r.lower(*it);
        std::vector<Rational> w(r.dim, Rational(0));
        for (std::size_t a = 0; a < r.dim; ++a)
            for (std::size_t b = 0; b < r.dim; ++b)
                if (v[b] != 0 && F(a, b) != 0)
                    w[a] += F(a, b) * v[b];
        v = std::move(w);
    }
    return v;
}

JetSource::JetSource(const GroupPair<Rational>& G, std::vector<GenExpr> left, std::vector<GenExpr> right)
    : G_(&G), left_(std::move(left)), right_(std::move(right))
{
    for (int j = 0; j < 2; ++j) {
        const Representation& r = *G(j + 1).rep;
        for (const auto& e : left_)
            lmats_[j].push_back(evaluate(e, r));
        for (const auto& e : right_)
            rmats_[j].push_back(evaluate(e, r));
    }
}

Jet<Rational> JetSource::operator()(int j, const Word& bra, const Word& ket) const
{
    const auto& g = (*G_)(j);
    const Representation& r = *g.rep;
    const auto& lm = lmats_[j - 1];
    const auto& rm = rmats_[j - 1];
    const std::size_t nl = lm.size(), nr = rm.size();
    const int m = vars();

    auto to_matrix = [&](const std::vector<Rational>& v, bool row) {
        RMatrix x(row ? 1 : r.dim, row ? r.dim : 1);
        for (std::size_t a = 0; a < r.dim; ++a)
            (row ? x(0, a) : x(a, 0)) = v[a];
        return x;
    };
    // bra·(product of selected left slots), one row per subset of left slots
    std::vector<RMatrix> rows(std::size_t(1) << nl);
    for (std::size_t s = 0; s < rows.size(); ++s) {
        RMatrix v = to_matrix(bra_vector(r, bra), true);
        for (std::size_t k = 0; k < nl; ++k)
            if (s >> k & 1)
                v = v * lm[k];
        rows[s] = v * g.M;
    }
    std::vector<RMatrix> cols(std::size_t(1) << nr);
    for (std::size_t s = 0; s < cols.size(); ++s) {
        RMatrix v = to_matrix(ket_vector(r, ket), false);
        for (std::size_t k = nr; k-- > 0;)
            if (s >> k & 1)
                v = rm[k] * v;
        cols[s] = v;
    }
    Jet<Rational> out(m);
    for (std::size_t sl = 0; sl < rows.size(); ++sl)
        for (std::size_t sr = 0; sr < cols.size(); ++sr)
            out[sl | (sr << nl)] = (rows[sl] * cols[sr])(0, 0);
    return out;
}

AlphaTable<Rational> alpha_table(const GroupPair<Rational>& G, Case c)
{
    return alpha_table<Rational>(element_source(G), G(1).rep->algebra, case_info(c).p == 3);
}

Rational check_first_jacobi(const GroupPair<Rational>& G, int j)
{
    auto el = element_source(G);
    const CartanData& cd = G(1).rep->algebra;
    Rational a = el(j, {j}, {j}), b = el(j, {j}, {}), c = el(j, {}, {j}), d = el(j, {}, {});
    Rational D1 = el(1, {}, {}), D2 = el(2, {}, {});
    Rational rhs = d * d * ipow(D1, -cd.k(j, 1)) * ipow(D2, -cd.k(j, 2));
    return a * d - b * c - rhs;
}

std::array<Rational, 2> check_second_jacobi(const GroupPair<Rational>& G)
{
    const int p = G(1).rep->algebra.p;
    auto t = alpha_table<Rational>(element_source(G), G(1).rep->algebra, false);
    return {t.ab21 + p * t.ab12 - p * t.ab1 * t.ab2, t.a12 + p * t.a21 - p * t.a1 * t.a2};
}

Det3Basis det3_basis(Case c)
{
    switch (c) {
    case Case::A2_10:
    case Case::B2_10:
    case Case::G2_10:
        return {2, {Word{}, Word{2}, Word{1, 2}}};
    case Case::B2_01:
        return {1, {Word{}, Word{1}, Word{2, 1}}};
    default:
        throw InvalidParameter("generalized Jacobi identity is not stated for " + case_info(c).name);
    }
}

Rational det3(const GroupPair<Rational>& G, Case c)
{
    Det3Basis b = det3_basis(c);
    RMatrix m(3, 3);
    for (int r = 0; r < 3; ++r) {
        Word bra(b.kets[r].rbegin(), b.kets[r].rend());
        for (int k = 0; k < 3; ++k)
            m(r, k) = matrix_element(*G(b.rep).rep, bra, G(b.rep).M, b.kets[k]);
    }
    return determinant(m);
}

Rational det3_closed_form(const GroupPair<Rational>& G, Case c)
{
    Rational D1 = matrix_element(*G(1).rep, {}, G(1).M, {});
    switch (c) {
    case Case::A2_10:
        return 1;
    case Case::B2_10:
        return 2 * D1 * D1;
    case Case::B2_01:
        return D1;
    case Case::G2_10:
        return 3 * ipow(D1, 4);
    default:
        throw InvalidParameter("generalized Jacobi identity is not stated for " + case_info(c).name);
    }
}

Rational check_generalized_jacobi(const GroupPair<Rational>& G, Case c)
{
    return det3(G, c) - det3_closed_form(G, c);
}

std::vector<IdentityResidual> check_appendix1(const GroupPair<Rational>& G)
{
    const CartanData& cd = G(1).rep->algebra;
    auto t0 = alpha_table<Rational>(element_source(G), cd, false);
    const Rational theta[2] = {t0.theta1, t0.theta2};
    const Rational alpha[2] = {t0.a1, t0.a2};
    const Rational alphab[2] = {t0.ab1, t0.ab2};
    std::vector<IdentityResidual> out;
    for (int q = 1; q <= 2; ++q) {
        JetSource right(G, {}, {GenExpr::lower(q)});
        JetSource left(G, {GenExpr::raise(q)}, {});
        auto tr = alpha_table<Jet<Rational>>(std::cref(right), cd, false);
        auto tl = alpha_table<Jet<Rational>>(std::cref(left), cd, false);
        const Jet<Rational>* thr[2] = {&tr.theta1, &tr.theta2};
        const Jet<Rational>* thl[2] = {&tl.theta1, &tl.theta2};
        const Jet<Rational>* abr[2] = {&tr.ab1, &tr.ab2};
        const Jet<Rational>* al[2] = {&tl.a1, &tl.a2};
        for (int i = 1; i <= 2; ++i) {
            const Rational kiq = cd.k(i, q);
            const Rational th = theta[i - 1];
            const Rational delta = i == q ? 1 : 0;
            out.push_back({fmt::format("(X-{})_r theta{} + theta{} K{}{} alpha{}", q, i, i, i, q, q),
                           thr[i - 1]->top() + th * kiq * alpha[q - 1]});
            out.push_back({fmt::format("(X+{})_l theta{} + theta{} K{}{} alphabar{}", q, i, i, i, q, q),
                           thl[i - 1]->top() + th * kiq * alphab[q - 1]});
            out.push_back({fmt::format("(X-{})_r alphabar{} - delta theta{}", q, i, i),
                           abr[i - 1]->top() - delta * th});
            out.push_back({fmt::format("(X+{})_l alpha{} - delta theta{}", q, i, i), al[i - 1]->top() - delta * th});
        }
    }
    return out;
}

G2Constants sample_g2_constants(std::uint64_t seed)
{
    // small nonzero rationals k/6, k in [-6,6]\{0}
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    auto draw = [&] {
        long k = static_cast<long>(rng() % 12) - 6;
        if (k >= 0)
            ++k;
        return Rational(k, 6);
    };
    G2Constants c;
    for (auto& x : c.d)
        x = draw();
    for (auto& x : c.db)
        x = draw();
    for (auto& x : c.d)
        x.canonicalize();
    for (auto& x : c.db)
        x.canonicalize();
    return c;
}

namespace {

// q-lines of G2(0,1) as jets for a given insertion.
struct LineJets {
    Jet<Rational> q1, q2, Pq, qb1, qb2;
};

LineJets line_jets(const GroupPair<Rational>& G, const G2Constants& k, std::vector<GenExpr> left,
                   std::vector<GenExpr> right)
{
    JetSource src(G, std::move(left), std::move(right));
    auto t = alpha_table<Jet<Rational>>(std::cref(src), G(1).rep->algebra, true);
    auto P = g2_01_P(t, k.d);
    auto Pb = g2_01_Pbar(t, k.db);
    auto l = g2_01_lines(P, t.a1);
    auto lb = g2_01_lines(Pb, t.ab1);
    return {l.q1, l.q2, l.Pq, lb.q1, lb.q2};
}

std::vector<GenExpr> raising(const Word& w)
{
    std::vector<GenExpr> v;
    for (int i : w)
        v.push_back(GenExpr::raise(i));
    return v;
}
std::vector<GenExpr> lowering(const Word& w)
{
    std::vector<GenExpr> v;
    for (int i : w)
        v.push_back(GenExpr::lower(i));
    return v;
}

} // namespace

std::vector<IdentityResidual> check_appendix2(const GroupPair<Rational>& G, const G2Constants& k)
{
    const CartanData& cd = G(1).rep->algebra;
    if (cd.p != 3)
        throw InvalidParameter("check_appendix2 needs the G2 representations");
    std::vector<IdentityResidual> out;

    auto t0 = alpha_table<Rational>(element_source(G), cd, true);
    auto P0 = g2_01_P(t0, k.d);
    const Rational Pq = P0[3] * t0.a1 - P0[2];
    const Rational th1 = t0.theta1, th2 = t0.theta2;
    const Rational& P4 = P0[3];
    const Rational& dq = k.d[4];

    // (a) the line components are annihilated by X⁺₂ from the left, their
    // conjugates by X⁻₂ from the right
    {
        auto l = line_jets(G, k, raising({2}), {});
        out.push_back({"(X+2)_l q1", l.q1.top()});
        out.push_back({"(X+2)_l q2", l.q2.top()});
        out.push_back({"(X+2)_l Pq", l.Pq.top()});
        auto r = line_jets(G, k, {}, lowering({2}));
        out.push_back({"(X-2)_r qbar1", r.qb1.top()});
        out.push_back({"(X-2)_r qbar2", r.qb2.top()});
    }

    // (c) derivative formulas; left lists are in application order, which is
    // also the insertion order for left derivatives
    out.push_back({"X+1 q1 - 2 theta1 Pq", line_jets(G, k, raising({1}), {}).q1.top() - 2 * th1 * Pq});
    out.push_back({"X+2X+1 q1 - 2 theta1 alphabar2 Pq",
                   line_jets(G, k, raising({1, 2}), {}).q1.top() - 2 * th1 * t0.ab2 * Pq});
    out.push_back({"X+1X+1 q1 - (2 theta1^2 P4 - 4 theta1 alphabar1 Pq)",
                   line_jets(G, k, raising({1, 1}), {}).q1.top() - (2 * th1 * th1 * P4 - 4 * th1 * t0.ab1 * Pq)});
    out.push_back({"X+1X+2X+1 q1 - (2 theta1 (alphabar21 - 2 alphabar1 alphabar2) Pq + 2 theta1^2 alphabar2 P4)",
                   line_jets(G, k, raising({1, 2, 1}), {}).q1.top() -
                       (2 * th1 * (t0.ab21 - 2 * t0.ab1 * t0.ab2) * Pq + 2 * th1 * th1 * t0.ab2 * P4)});
    out.push_back({"X+2X+1X+1 q1 - (4 theta1^2 alphabar2 P4 - 4 d2 theta1^2 theta2 - 4 theta1 (alphabar1 alphabar2 + "
                   "alphabar12) Pq)",
                   line_jets(G, k, raising({1, 1, 2}), {}).q1.top() -
                       (4 * th1 * th1 * t0.ab2 * P4 - 4 * dq * th1 * th1 * th2 -
                        4 * th1 * (t0.ab1 * t0.ab2 + t0.ab12) * Pq)});

    // (b) Det3 over the first representation. The bra is the conjugate of the
    // ket X⁻₂X⁻₁X⁻₁X⁻₂X⁻₁|1⟩.
    const std::array<Word, 3> kets = {Word{}, Word{1}, Word{2, 1, 1, 2, 1}};
    RMatrix m(3, 3);
    for (int r = 0; r < 3; ++r) {
        Word bra(kets[r].rbegin(), kets[r].rend());
        for (int c = 0; c < 3; ++c)
            m(r, c) = matrix_element(*G(1).rep, bra, G(1).M, kets[c]);
    }
    const Rational D1 = t0.D1;

    // (X⁺₁)_r applied after the right insertion (A X⁻₁X⁻₂ + B X⁻₂X⁻₁)X⁻₁ on ⟨1|K|1⟩²
    auto d1_squared_top = [&](std::vector<GenExpr> left, std::vector<GenExpr> right) {
        JetSource src(G, std::move(left), std::move(right));
        auto D = src(1, {}, {});
        return (D * D).top();
    };
    const Rational vA = d1_squared_top({}, {GenExpr::raise(1), GenExpr::lower(1), GenExpr::lower(2), GenExpr::lower(1)});
    const Rational vB = d1_squared_top({}, {GenExpr::raise(1), GenExpr::lower(2), GenExpr::lower(1), GenExpr::lower(1)});
    out.push_back({"(X+1)_r annihilates A=2,B=-3 insertion", 2 * vA - 3 * vB});

    const std::pair<int, Word> rcomb[2] = {{2, {1, 2, 1}}, {-3, {2, 1, 1}}};
    const std::pair<int, Word> lcomb[2] = {{2, {1, 2, 1}}, {-3, {1, 1, 2}}};
    Rational T = 0;
    for (const auto& [cr, rw] : rcomb)
        for (const auto& [cl, lw] : lcomb)
            T += cr * cl * d1_squared_top(raising(lw), lowering(rw));
    out.push_back({"Det3 - (T/16 + <1|K|1>)", determinant(m) - (T / 16 + D1)});
    return out;
}

} // namespace toda
