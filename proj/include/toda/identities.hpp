#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "toda/algebra.hpp"
#include "toda/generators.hpp"
#include "toda/grading.hpp"
#include "toda/jet.hpp"

namespace toda {

// Generator letters in written order: bra {2,1} is ⟨j|X⁺₂X⁺₁, ket {1,2} is X⁻₁X⁻₂|j⟩.
using Word = std::vector<int>;

struct Algebra {
    CartanData cd;
    std::array<Representation, 2> fund;

    const Representation& rep(int j) const;
};

Algebra make_algebra(int p);

template <class T>
struct GroupElement {
    const Representation* rep = nullptr;
    Matrix<T> M;
    std::string provenance;
};

// One abstract group element realised in both fundamental representations.
template <class T>
struct GroupPair {
    std::array<GroupElement<T>, 2> g;
    const GroupElement<T>& operator()(int j) const { return g.at(static_cast<std::size_t>(j - 1)); }
};

// Product of `length` factors exp(t X), X in {E1,E2,F1,F2}, t in
// {±1, ±1/2, ±1/3, ±2}. Draws come from std::mt19937_64(seed), two raw
// outputs per factor (generator, parameter), so the same seed gives the same
// abstract element in every representation.
GroupElement<Rational> sample_group_element(const Representation& r, std::uint64_t seed, int length);
GroupPair<Rational> sample_group_pair(const Algebra& a, std::uint64_t seed, int length);

// D(λ) = diag(λ1^{w1} λ2^{w2}) over the basis weights; an exact torus element.
RMatrix torus_element(const Representation& r, const Rational& l1, const Rational& l2);

std::vector<Rational> bra_vector(const Representation& r, const Word& raising);
std::vector<Rational> ket_vector(const Representation& r, const Word& lowering);

template <class T>
T from_rational(const Rational& q)
{
    if constexpr (std::is_same_v<T, double>)
        return q.get_d();
    else
        return T(q);
}

// ⟨j| X⁺_{b1}…X⁺_{bn} G X⁻_{k1}…X⁻_{km} |j⟩ with the form-dual bra.
template <class T>
T matrix_element(const Representation& r, const Word& bra, const Matrix<T>& G, const Word& ket)
{
    if (G.rows() != r.dim || G.cols() != r.dim)
        throw DimensionMismatch("matrix_element: group element does not match representation");
    auto b = bra_vector(r, bra);
    auto k = ket_vector(r, ket);
    T s(0);
    for (std::size_t i = 0; i < r.dim; ++i) {
        if (b[i] == 0)
            continue;
        T row(0);
        for (std::size_t j = 0; j < r.dim; ++j)
            if (k[j] != 0)
                row += G(i, j) * from_rational<T>(k[j]);
        s += from_rational<T>(b[i]) * row;
    }
    return s;
}

// Matrix elements of one group element: (rep label, bra, ket) -> value.
template <class T>
using ElementSource = std::function<T(int, const Word&, const Word&)>;

template <class T>
ElementSource<T> element_source(const GroupPair<T>& G)
{
    return [&G](int j, const Word& bra, const Word& ket) {
        return matrix_element(*G(j).rep, bra, G(j).M, ket);
    };
}

// Elements of G(e) = (prod_k (1 + e_k Y_k)) G (prod_k (1 + e_k Z_k)) as jets.
// Both lists are in insertion (written) order; left slots take the low bits.
// For successive left derivatives the first applied operator is outermost;
// for right derivatives the last applied one sits next to G.
class JetSource {
public:
    JetSource(const GroupPair<Rational>& G, std::vector<GenExpr> left, std::vector<GenExpr> right);
    Jet<Rational> operator()(int j, const Word& bra, const Word& ket) const;
    int vars() const { return static_cast<int>(left_.size() + right_.size()); }

private:
    const GroupPair<Rational>* G_;
    std::vector<GenExpr> left_, right_;
    std::array<std::vector<RMatrix>, 2> lmats_, rmats_;
};

template <class T>
struct AlphaTable {
    T D1, D2; // ⟨i|G|i⟩
    T a1, a2, ab1, ab2, a12, a21, ab12, ab21;
    T theta1, theta2;
    // G2 only
    std::optional<T> a112, a1112, a121, ab211, ab2111, ab121;
};

// α_w = ⟨r|G X⁻_w|r⟩/⟨r|G|r⟩ with r the last letter of w; ᾱ_w = ⟨r|X⁺_w G|r⟩/⟨r|G|r⟩
// with r the first letter; θ_j = prod_i ⟨i|G|i⟩^{-K_ji}.
template <class T>
AlphaTable<T> alpha_table(const ElementSource<T>& el, const CartanData& cd, bool g2_extensions)
{
    AlphaTable<T> t;
    t.D1 = el(1, {}, {});
    t.D2 = el(2, {}, {});
    if (value_of(t.D1) == 0 || value_of(t.D2) == 0)
        throw SingularElement("alpha_table: vanishing diagonal matrix element");
    auto a = [&](const Word& w) -> T { return el(w.back(), {}, w) / (w.back() == 1 ? t.D1 : t.D2); };
    auto ab = [&](const Word& w) -> T { return el(w.front(), w, {}) / (w.front() == 1 ? t.D1 : t.D2); };
    t.a1 = a({1});
    t.a2 = a({2});
    t.ab1 = ab({1});
    t.ab2 = ab({2});
    t.a12 = a({1, 2});
    t.a21 = a({2, 1});
    t.ab12 = ab({1, 2});
    t.ab21 = ab({2, 1});
    t.theta1 = ipow(t.D1, -cd.K[0][0]) * ipow(t.D2, -cd.K[0][1]);
    t.theta2 = ipow(t.D1, -cd.K[1][0]) * ipow(t.D2, -cd.K[1][1]);
    if (g2_extensions) {
        t.a112 = a({1, 1, 2});
        t.a1112 = a({1, 1, 1, 2});
        t.a121 = a({1, 2, 1});
        t.ab211 = ab({2, 1, 1});
        t.ab2111 = ab({2, 1, 1, 1});
        t.ab121 = ab({1, 2, 1});
    }
    return t;
}

AlphaTable<Rational> alpha_table(const GroupPair<Rational>& G, Case c);

struct IdentityResidual {
    std::string name;
    Rational value;
};

// det[[⟨X⁺GX⁻⟩,⟨X⁺G⟩],[⟨GX⁻⟩,⟨G⟩]] − ⟨j|G|j⟩²·prod_i ⟨i|G|i⟩^{-K_ji}
Rational check_first_jacobi(const GroupPair<Rational>& G, int j);
// {ᾱ₂₁ + pᾱ₁₂ − pᾱ₁ᾱ₂, α₁₂ + pα₂₁ − pα₁α₂}
std::array<Rational, 2> check_second_jacobi(const GroupPair<Rational>& G);

struct Det3Basis {
    int rep;
    std::array<Word, 3> kets; // bras are their conjugates
};
Det3Basis det3_basis(Case c);
Rational det3(const GroupPair<Rational>& G, Case c);
Rational det3_closed_form(const GroupPair<Rational>& G, Case c);
Rational check_generalized_jacobi(const GroupPair<Rational>& G, Case c);

std::vector<IdentityResidual> check_appendix1(const GroupPair<Rational>& G);

// Constant coefficients d1..d4, d² of the G2(0,1) line operator (and the
// barred set, used for q̄).
struct G2Constants {
    std::array<Rational, 5> d{Rational(1), Rational(1), Rational(1), Rational(1), Rational(1)};
    std::array<Rational, 5> db{Rational(1), Rational(1), Rational(1), Rational(1), Rational(1)};
};
G2Constants sample_g2_constants(std::uint64_t seed);

std::vector<IdentityResidual> check_appendix2(const GroupPair<Rational>& G, const G2Constants& k);

} // namespace toda
