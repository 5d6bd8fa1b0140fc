#pragma once

#include <array>

#include "toda/identities.hpp"

// Field multiplets built from the α-table and the coefficient values. T is the
// field scalar (double, Rational, or a jet), C the coefficient scalar.
namespace toda {

// B2(1,0): p1 = c2 + 2c²α₁, p2 = c1 + 2c²α₂₁
template <class T, class C>
std::array<T, 2> b2_10_p(const AlphaTable<T>& a, const C& c1, const C& c2, const C& cc)
{
    return {C(2) * cc * a.a1 + c2, C(2) * cc * a.a21 + c1};
}
template <class T, class C>
std::array<T, 2> b2_10_pbar(const AlphaTable<T>& a, const C& cb1, const C& cb2, const C& cbc)
{
    return {C(2) * cbc * a.ab1 + cb2, C(2) * cbc * a.ab12 + cb1};
}

// G2(0,1), components indexed by the coefficient they start from:
// P1 ~ α₁₁₁₂, P2 ~ α₁₁₂, P3 ~ α₁₂, P4 ~ α₂. Coefficients ordered d1..d4, d².
template <class T, class C>
std::array<T, 4> g2_01_P(const AlphaTable<T>& a, const std::array<C, 5>& d)
{
    const C& dq = d[4];
    return {-(dq / C(3)) * *a.a1112 + d[0], -(dq / C(3)) * *a.a112 + d[1],
            -(C(2) * dq / C(3)) * a.a12 + d[2], -(C(2) * dq) * a.a2 + d[3]};
}
template <class T, class C>
std::array<T, 4> g2_01_Pbar(const AlphaTable<T>& a, const std::array<C, 5>& db)
{
    const C& dq = db[4];
    return {-(dq / C(3)) * *a.ab2111 + db[0], -(dq / C(3)) * *a.ab211 + db[1],
            -(C(2) * dq / C(3)) * a.ab21 + db[2], -(C(2) * dq) * a.ab2 + db[3]};
}

template <class T>
struct G2Lines {
    T q1, q2, Pq;
};

// q1 = P2 − 2P3α₁ + P4α₁², q2 = P1 − 2P2α₁ + P3α₁², Pq = P4α₁ − P3
template <class T>
G2Lines<T> g2_01_lines(const std::array<T, 4>& P, const T& alpha1)
{
    T a2 = alpha1 * alpha1;
    return {P[1] - P[2] * alpha1 - P[2] * alpha1 + P[3] * a2, P[0] - P[1] * alpha1 - P[1] * alpha1 + P[2] * a2,
            P[3] * alpha1 - P[2]};
}

// G2(1,0) in the gauge c³₂ = 0. Coefficients ordered c¹₁, c¹₂, c², c³₁, c³₂.
// `k3` is the factor of c³₁(α₁₂₁ + 2α₁α₂₁) in the second spinor component.
template <class T, class C>
std::array<T, 2> g2_10_p1(const AlphaTable<T>& a, const std::array<C, 5>& c, const C& k3 = C(-3))
{
    const T& a1 = a.a1;
    return {C(4) * c[2] * a1 - (C(6) * c[3]) * (a1 * a1) - c[1],
            C(4) * c[2] * a.a21 + (k3 * c[3]) * (*a.a121 + C(2) * (a1 * a.a21)) + c[0]};
}
template <class T, class C>
T g2_10_p2(const AlphaTable<T>& a, const std::array<C, 5>& c)
{
    return -(C(3) * c[3]) * a.a1 + c[2];
}
template <class T, class C>
std::array<T, 2> g2_10_p1bar(const AlphaTable<T>& a, const std::array<C, 5>& cb, const C& k3 = C(-3))
{
    const T& a1 = a.ab1;
    return {C(4) * cb[2] * a1 - (C(6) * cb[3]) * (a1 * a1) - cb[1],
            C(4) * cb[2] * a.ab12 + (k3 * cb[3]) * (*a.ab121 + C(2) * (a1 * a.ab12)) + cb[0]};
}
template <class T, class C>
T g2_10_p2bar(const AlphaTable<T>& a, const std::array<C, 5>& cb)
{
    return -(C(3) * cb[3]) * a.ab1 + cb[2];
}

} // namespace toda
