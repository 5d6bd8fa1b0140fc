#include "toda/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include <fmt/format.h>

namespace toda {

// ---------------------------------------------------------------- stencils

int stencil_halfwidth(int order)
{
    if (order == 2)
        return 1;
    if (order == 4)
        return 2;
    throw InvalidParameter(fmt::format("stencil order must be 2 or 4, got {}", order));
}

namespace {

// 1-D first-derivative weights at offsets −hw..hw (to be divided by h)
const std::vector<double>& weights(int order)
{
    static const std::vector<double> w2{-0.5, 0.0, 0.5};
    static const std::vector<double> w4{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
    return order == 2 ? w2 : w4;
}

void require_support(const Grid& g, int i, int j, int hw, bool need_x, bool need_y)
{
    if (i < 0 || j < 0 || i >= g.nx || j >= g.ny)
        throw InvalidParameter(fmt::format("node ({},{}) is outside the grid", i, j));
    if ((need_x && (i < hw || i >= g.nx - hw)) || (need_y && (j < hw || j >= g.ny - hw)))
        throw InvalidParameter(fmt::format("node ({},{}) lacks stencil support", i, j));
}

} // namespace

double first_derivative(const Grid& g, const std::vector<double>& f, int i, int j, Axis axis, int order)
{
    const int hw = stencil_halfwidth(order);
    require_support(g, i, j, hw, axis == Axis::X, axis == Axis::Y);
    const auto& w = weights(order);
    double s = 0;
    for (int k = -hw; k <= hw; ++k) {
        if (w[static_cast<std::size_t>(k + hw)] == 0)
            continue;
        std::size_t n = axis == Axis::X ? static_cast<std::size_t>(i + k) * g.ny + j
                                        : static_cast<std::size_t>(i) * g.ny + (j + k);
        s += w[static_cast<std::size_t>(k + hw)] * f[n];
    }
    return s / (axis == Axis::X ? g.hx() : g.hy());
}

double mixed_derivative(const Grid& g, const std::vector<double>& f, int i, int j, int order)
{
    const int hw = stencil_halfwidth(order);
    require_support(g, i, j, hw, true, true);
    const auto& w = weights(order);
    double s = 0;
    for (int a = -hw; a <= hw; ++a) {
        double wa = w[static_cast<std::size_t>(a + hw)];
        if (wa == 0)
            continue;
        for (int b = -hw; b <= hw; ++b) {
            double wb = w[static_cast<std::size_t>(b + hw)];
            if (wb != 0)
                s += wa * wb * f[static_cast<std::size_t>(i + a) * g.ny + (j + b)];
        }
    }
    return s / (g.hx() * g.hy());
}

// ---------------------------------------------------------------- reports

const EquationResidual& ResidualReport::find(const std::string& name) const
{
    for (const auto& e : equations)
        if (e.name == name)
            return e;
    throw InvalidParameter("residual report has no equation '" + name + "'");
}

double ResidualReport::max_residual() const
{
    double m = 0;
    for (const auto& e : equations)
        if (!e.diagnostic)
            m = std::max(m, e.value);
    return m;
}

namespace {

using M2 = std::array<std::array<double, 2>, 2>;
using V2 = std::array<double, 2>;

M2 mul(const M2& a, const M2& b)
{
    M2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}
M2 add(const M2& a, const M2& b)
{
    M2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][j] + b[i][j];
    return c;
}
M2 scale(double s, const M2& a)
{
    M2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = s * a[i][j];
    return c;
}
M2 transpose(const M2& a) { return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}}; }
M2 inv(const M2& a)
{
    double d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    return {{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}
M2 outer(const V2& a, const V2& b) { return {{{a[0] * b[0], a[0] * b[1]}, {a[1] * b[0], a[1] * b[1]}}}; }
V2 mv(const M2& a, const V2& v) { return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]}; }
double dot(const V2& a, const V2& b) { return a[0] * b[0] + a[1] * b[1]; }

const M2 eps_sym{{{1, -1}, {-1, 1}}};
const M2 eps_asym{{{0, 1}, {-1, 0}}};

// Walks the usable interior nodes and accumulates per-equation maxima.
class Evaluator {
public:
    Evaluator(const SolutionField& f, int stencil, double margin)
        : f_(f), stencil_(stencil), hw_(stencil_halfwidth(stencil)), margin_(margin)
    {
        report_.id = f.id;
        report_.stencil = stencil;
        report_.hx = f.grid.hx();
        report_.hy = f.grid.hy();
    }

    // visits every usable node; excluded ones are recorded in the report
    void run(const std::function<void(int, int)>& body)
    {
        const Grid& g = f_.grid;
        for (int i = hw_; i < g.nx - hw_; ++i)
            for (int j = hw_; j < g.ny - hw_; ++j) {
                if (outside_window(i, j))
                    continue;
                if (touches_singular(i, j)) {
                    report_.excluded.emplace_back(i, j);
                    continue;
                }
                i_ = i;
                j_ = j;
                body(i, j);
            }
    }

    double val(int ch) const { return f_.at(ch, i_, j_); }
    double val(const std::string& name) const { return val(f_.channel(name)); }
    double d(const std::string& name, Axis a) const
    {
        return first_derivative(f_.grid, f_.channels[static_cast<std::size_t>(f_.channel(name))], i_, j_, a, stencil_);
    }
    double x() const { return f_.grid.x(i_); }
    double y() const { return f_.grid.y(j_); }

    M2 U() const { return block([&](int ch) { return val(ch); }); }
    M2 Ux() const { return block([&](int ch) { return deriv(ch, Axis::X); }); }
    M2 Uy() const { return block([&](int ch) { return deriv(ch, Axis::Y); }); }
    M2 Uxy() const
    {
        return block([&](int ch) { return mixed_derivative(f_.grid, f_.channels[static_cast<std::size_t>(ch)], i_, j_, stencil_); });
    }
    double det() const
    {
        M2 u = U();
        return u[0][0] * u[1][1] - u[0][1] * u[1][0];
    }
    // (u⁻¹u_x)_y, or u times it
    M2 lhs(bool premultiplied) const
    {
        M2 ui = inv(U());
        M2 t = add(Uxy(), scale(-1, mul(mul(Uy(), ui), Ux())));
        return premultiplied ? t : mul(ui, t);
    }

    double coef(Side side, std::size_t k) const
    {
        auto names = coefficient_slots(f_.id, side);
        return f_.coeffs.at(names.at(k)).value(side == Side::Minus ? x() : y());
    }

    void add_eq(const std::string& name, double lhs, double rhs, bool diagnostic = false)
    {
        auto& a = slot(name, diagnostic);
        a.diff = std::max(a.diff, std::abs(lhs - rhs));
        a.rhs = std::max(a.rhs, std::abs(rhs));
        if (!std::isfinite(lhs) || !std::isfinite(rhs))
            a.diff = std::numeric_limits<double>::infinity();
    }
    void add_eq(const std::string& name, const M2& lhs, const M2& rhs, bool diagnostic = false)
    {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                add_eq(name, lhs[i][j], rhs[i][j], diagnostic);
    }
    void add_eq(const std::string& name, const V2& lhs, const V2& rhs, bool diagnostic = false)
    {
        for (int i = 0; i < 2; ++i)
            add_eq(name, lhs[i], rhs[i], diagnostic);
    }

    ResidualReport finish()
    {
        for (const auto& name : order_) {
            const auto& a = acc_.at(name);
            report_.equations.push_back({name, a.diff / std::max(1.0, a.rhs), a.diagnostic});
        }
        return report_;
    }

private:
    struct Acc {
        double diff = 0, rhs = 0;
        bool diagnostic = false;
    };
    Acc& slot(const std::string& name, bool diagnostic)
    {
        auto it = acc_.find(name);
        if (it == acc_.end()) {
            order_.push_back(name);
            it = acc_.emplace(name, Acc{0, 0, diagnostic}).first;
        }
        return it->second;
    }

    double deriv(int ch, Axis a) const
    {
        return first_derivative(f_.grid, f_.channels[static_cast<std::size_t>(ch)], i_, j_, a, stencil_);
    }
    template <class F>
    M2 block(F&& g) const
    {
        return {{{g(0), g(1)}, {g(2), g(3)}}};
    }
    bool outside_window(int i, int j) const
    {
        if (margin_ < 0)
            return false;
        const Grid& g = f_.grid;
        const double tx = 1e-9 * g.hx(), ty = 1e-9 * g.hy();
        double x = g.x(i), y = g.y(j);
        return x < g.x0 + margin_ - tx || x > g.x1 - margin_ + tx || y < g.y0 + margin_ - ty || y > g.y1 - margin_ + ty;
    }
    bool touches_singular(int i, int j) const
    {
        for (int a = i - hw_; a <= i + hw_; ++a)
            for (int b = j - hw_; b <= j + hw_; ++b)
                if (f_.singular[f_.node(a, b)])
                    return true;
        return false;
    }

    const SolutionField& f_;
    int stencil_, hw_;
    double margin_;
    int i_ = 0, j_ = 0;
    ResidualReport report_;
    std::map<std::string, Acc> acc_;
    std::vector<std::string> order_;
};

void require_case(const SolutionField& f, Case c)
{
    if (f.id != c)
        throw InvalidParameter("residual for " + case_info(c).name + " called on a " + case_info(f.id).name + " field");
    if (!f.grade_zero_trivial)
        throw InvalidParameter("residuals assume vanishing grade-0 functions A0 = B0 = 0");
}

// Coefficient rows of the P equations, indexed a = 1..4 (entry [a-1]); u → uᵀ gives the conjugate system.
std::array<std::array<double, 4>, 4> ble_rows(const M2& u, bool printed_row3 = false)
{
    const double u11 = u[0][0], u12 = u[0][1], u21 = u[1][0], u22 = u[1][1];
    std::array<std::array<double, 4>, 4> T{};
    T[3] = {u11 * u11 * u11, -3 * u11 * u11 * u12, 3 * u11 * u12 * u12, -u12 * u12 * u12};
    T[2] = {u11 * u11 * u21, -(u11 * u11 * u22 + 2 * u11 * u21 * u12),
            printed_row3 ? 2 * u11 * u12 * u21 + u12 * u12 * u21 : 2 * u11 * u12 * u22 + u12 * u12 * u21,
            -u12 * u12 * u22};
    T[1] = {u11 * u21 * u21, -(u21 * u21 * u12 + 2 * u11 * u21 * u22), 2 * u22 * u12 * u21 + u22 * u22 * u11,
            -u22 * u22 * u12};
    T[0] = {u21 * u21 * u21, -3 * u21 * u21 * u22, 3 * u21 * u22 * u22, -u22 * u22 * u22};
    return T;
}

// Σ u_ij u_kl ε_ik ε_jl p̄^{ik} ⊗ p^{jl}, with p^{jl} given by `pair`
M2 be_sum(const M2& u, const std::function<V2(int, int)>& pbar_pair, const std::function<V2(int, int)>& p_pair)
{
    M2 S{};
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
            for (int k = 1; k <= 2; ++k)
                for (int l = 1; l <= 2; ++l) {
                    double w = u[i - 1][j - 1] * u[k - 1][l - 1] * eps_sym[i - 1][k - 1] * eps_sym[j - 1][l - 1];
                    if (w != 0)
                        S = add(S, scale(w, outer(pbar_pair(i, k), p_pair(j, l))));
                }
    return S;
}

} // namespace

ResidualReport residual_A2(const SolutionField& f, int stencil, double margin)
{
    require_case(f, Case::A2_10);
    Evaluator ev(f, stencil, margin);
    ev.run([&](int, int) {
        double c1 = ev.coef(Side::Minus, 0), c2 = ev.coef(Side::Minus, 1);
        double cb1 = ev.coef(Side::Plus, 0), cb2 = ev.coef(Side::Plus, 1);
        M2 ui = inv(ev.U());
        double det = ev.det();
        M2 L = ev.lhs(false);
        M2 C{{{c2 * cb2, c1 * cb2}, {c2 * cb1, c1 * cb1}}};
        M2 Cp{{{c2 * cb2, c1 * cb2}, {c2 * cb1, c2 * cb2}}};
        ev.add_eq("u: X = c1 cb1", L, scale(1 / det, mul(ui, C)));
        ev.add_eq("u: X = c2 cb2 (printed)", L, scale(1 / det, mul(ui, Cp)), true);
    });
    return ev.finish();
}

ResidualReport residual_B2_10(const SolutionField& f, int stencil, double margin)
{
    require_case(f, Case::B2_10);
    Evaluator ev(f, stencil, margin);
    ev.run([&](int, int) {
        double cc = ev.coef(Side::Minus, 2), cbc = ev.coef(Side::Plus, 2);
        M2 u = ev.U();
        double det = ev.det();
        double p1 = ev.val("p1"), p2 = ev.val("p2"), pb1 = ev.val("pb1"), pb2 = ev.val("pb2");
        M2 P{{{p1 * pb1, p2 * pb1}, {p1 * pb2, p2 * pb2}}};
        ev.add_eq("u", ev.lhs(true), add(scale(2, P), scale(4 * cc * cbc / det, u)));
        const double u11 = u[0][0], u12 = u[0][1], u21 = u[1][0], u22 = u[1][1];
        ev.add_eq("(p1)_y", ev.d("p1", Axis::Y), 2 * cc / det * (u11 * pb2 - u21 * pb1));
        ev.add_eq("(p2)_y", ev.d("p2", Axis::Y), 2 * cc / det * (u12 * pb2 - u22 * pb1));
        ev.add_eq("(pb1)_x", ev.d("pb1", Axis::X), 2 * cbc / det * (u11 * p2 - u12 * p1));
        ev.add_eq("(pb2)_x", ev.d("pb2", Axis::X), 2 * cbc / det * (u21 * p2 - u22 * p1));
    });
    return ev.finish();
}

ResidualReport residual_B2_01(const SolutionField& f, int stencil, double margin)
{
    require_case(f, Case::B2_01);
    Evaluator ev(f, stencil, margin);
    ev.run([&](int, int) {
        double d1 = ev.coef(Side::Minus, 0), d2 = ev.coef(Side::Minus, 1), d3 = ev.coef(Side::Minus, 2);
        double db1 = ev.coef(Side::Plus, 0), db2 = ev.coef(Side::Plus, 1), db3 = ev.coef(Side::Plus, 2);
        M2 u = ev.U();
        M2 A{{{db2, -db3}, {db1, -db2}}};
        M2 B{{{d2, d1}, {-d3, -d2}}};
        M2 rhs = scale(1 / ev.det(), mul(mul(mul(inv(u), A), u), B));
        ev.add_eq("u", ev.lhs(false), rhs);
    });
    return ev.finish();
}

namespace {

struct G2_01Node {
    std::array<double, 4> P, Pb;
    double dq, dbq;
};

G2_01Node g2_01_node(const Evaluator& ev)
{
    G2_01Node n{};
    for (int a = 0; a < 4; ++a) {
        n.P[a] = ev.val(fmt::format("P{}", a + 1));
        n.Pb[a] = ev.val(fmt::format("Pb{}", a + 1));
    }
    n.dq = ev.coef(Side::Minus, 4);
    n.dbq = ev.coef(Side::Plus, 4);
    return n;
}

// p^{jl} = (P_{j+l}, P_{j+l−1}); the printed alternative swaps the mixed pair
V2 pair(const std::array<double, 4>& P, int j, int l, bool printed_mixed)
{
    int s = j + l;
    if (s == 3 && printed_mixed)
        return {P[1], P[2]};
    return {P[s - 1], P[s - 2]};
}

} // namespace

ResidualReport residual_G2_01(const SolutionField& f, int stencil, double margin)
{
    require_case(f, Case::G2_01);
    Evaluator ev(f, stencil, margin);
    ev.run([&](int, int) {
        auto n = g2_01_node(ev);
        M2 u = ev.U();
        double det = ev.det();
        M2 S = be_sum(
            u, [&](int i, int k) { return pair(n.Pb, i, k, false); }, [&](int j, int l) { return pair(n.P, j, l, false); });
        ev.add_eq("u", ev.lhs(true), add(scale(1 / det, S), scale(4 * n.dq * n.dbq / det, u)));

        auto T = ble_rows(u);
        auto Tt = ble_rows(transpose(u));
        auto Tp = ble_rows(u, true);
        double fb = -2 * n.dbq / (det * det), fp = -2 * n.dq / (det * det);
        for (int a = 4; a >= 1; --a) {
            double rb = 0, rp = 0, rprinted = 0;
            for (int b = 0; b < 4; ++b) {
                rb += T[a - 1][b] * n.P[b];
                rp += Tt[a - 1][b] * n.Pb[b];
                rprinted += Tp[a - 1][b] * n.P[b];
            }
            ev.add_eq(fmt::format("(Pb{})_x", a), ev.d(fmt::format("Pb{}", a), Axis::X), fb * rb);
            ev.add_eq(fmt::format("(P{})_y", a), ev.d(fmt::format("P{}", a), Axis::Y), fp * rp);
            if (a == 3)
                ev.add_eq("(Pb3)_x printed row", ev.d("Pb3", Axis::X), fb * rprinted, true);
        }
    });
    return ev.finish();
}

std::vector<PermutationResidual> g2_01_ordering_scan(const SolutionField& f, int stencil, double margin)
{
    require_case(f, Case::G2_01);
    std::array<int, 4> perm{1, 2, 3, 4};
    std::vector<PermutationResidual> out;
    do {
        Evaluator ev(f, stencil, margin);
        ev.run([&](int, int) {
            auto n = g2_01_node(ev);
            M2 u = ev.U();
            double det = ev.det();
            auto T = ble_rows(u);
            auto Tt = ble_rows(transpose(u));
            double fb = -2 * n.dbq / (det * det), fp = -2 * n.dq / (det * det);
            for (int a = 0; a < 4; ++a) {
                double rb = 0, rp = 0;
                for (int b = 0; b < 4; ++b) {
                    rb += T[a][b] * n.P[perm[b] - 1];
                    rp += Tt[a][b] * n.Pb[perm[b] - 1];
                }
                ev.add_eq("P rows", ev.d(fmt::format("Pb{}", perm[a]), Axis::X), fb * rb);
                ev.add_eq("P rows", ev.d(fmt::format("P{}", perm[a]), Axis::Y), fp * rp);
            }
        });
        out.push_back({perm, ev.finish().find("P rows").value});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::vector<LayoutResidual> g2_01_layout_scan(const SolutionField& f, int stencil, double margin)
{
    require_case(f, Case::G2_01);
    std::vector<LayoutResidual> out;
    for (bool printed : {false, true}) {
        Evaluator ev(f, stencil, margin);
        ev.run([&](int, int) {
            auto n = g2_01_node(ev);
            M2 u = ev.U();
            double det = ev.det();
            M2 S = be_sum(
                u, [&](int i, int k) { return pair(n.Pb, i, k, printed); },
                [&](int j, int l) { return pair(n.P, j, l, printed); });
            ev.add_eq("u", ev.lhs(true), add(scale(1 / det, S), scale(4 * n.dq * n.dbq / det, u)));
        });
        out.push_back({printed ? "p12 = (P2,P3)" : "p12 = (P3,P2)", ev.finish().find("u").value});
    }
    return out;
}

ResidualReport residual_G2_10(const SolutionField& f, int stencil, double margin)
{
    require_case(f, Case::G2_10);
    if (!f.gauge_c3_2_zero && !(f.coeffs.at("c^3_2").is_zero() && f.coeffs.at("cb^3_2").is_zero()))
        throw InvalidParameter("G2(1,0) residuals are only available in the gauge c^3_2 = cb^3_2 = 0");
    Evaluator ev(f, stencil, margin);
    ev.run([&](int, int) {
        M2 u = ev.U();
        double det = ev.det();
        double D = std::cbrt(det);
        V2 c3{ev.coef(Side::Minus, 3), 0}, cb3{ev.coef(Side::Plus, 3), 0};
        V2 p1{ev.val("p1_1"), ev.val("p1_2")}, pb1{ev.val("pb1_1"), ev.val("pb1_2")};
        V2 p1_printed{p1[0], ev.val("p1_2_printed")}, pb1_printed{pb1[0], ev.val("pb1_2_printed")};
        double p2 = ev.val("p2"), pb2 = ev.val("pb2");
        const M2& e = eps_asym;
        M2 ut = transpose(u), et = transpose(e);
        V2 c3u{c3[0] * u[0][0] + c3[1] * u[1][0], c3[0] * u[0][1] + c3[1] * u[1][1]}; // c3ᵀu
        V2 c3et = mv(e, c3);                                                      // (c3ᵀeᵀ)ᵀ = e c3

        M2 L = ev.lhs(true);
        M2 common = add(scale(3 * D, outer(pb1, p1)), scale(12 / D * pb2 * p2, u));
        M2 rhs = add(add(common, scale(36 / det, outer(mv(u, cb3), c3u))), scale(72, outer(mv(e, cb3), c3et)));
        ev.add_eq("u", L, rhs);

        ev.add_eq("(pb2)_x", ev.d("pb2", Axis::X), -3 / (D * D) * dot(cb3, mv(u, mv(e, p1))));
        ev.add_eq("(p2)_y", ev.d("p2", Axis::Y), -3 / (D * D) * dot(c3, mv(ut, mv(e, pb1))));
        V2 ue_p1 = mv(u, mv(e, p1)), ute_pb1 = mv(ut, mv(e, pb1));
        V2 etcb3 = mv(et, cb3), etc3 = mv(et, c3);
        V2 rb{4 / (D * D) * pb2 * ue_p1[0] + 12 / D * p2 * etcb3[0], 4 / (D * D) * pb2 * ue_p1[1] + 12 / D * p2 * etcb3[1]};
        V2 rp{4 / (D * D) * p2 * ute_pb1[0] + 12 / D * pb2 * etc3[0], 4 / (D * D) * p2 * ute_pb1[1] + 12 / D * pb2 * etc3[1]};
        ev.add_eq("(pb1)_x", V2{ev.d("pb1_1", Axis::X), ev.d("pb1_2", Axis::X)}, rb);
        ev.add_eq("(p1)_y", V2{ev.d("p1_1", Axis::Y), ev.d("p1_2", Axis::Y)}, rp);

        // printed forms
        M2 hv_printed = add(common, scale(18 / det, outer(mv(u, cb3), c3u)));
        ev.add_eq("u printed last term", L, hv_printed, true);
        M2 hv_printed_p = add(add(add(scale(3 * D, outer(pb1_printed, p1_printed)), scale(12 / D * pb2 * p2, u)),
                                  scale(36 / det, outer(mv(u, cb3), c3u))),
                              scale(72, outer(mv(e, cb3), c3et)));
        ev.add_eq("u printed p1 coefficient", L, hv_printed_p, true);
        V2 rb_printed{1 / (D * D) * pb2 * ue_p1[0], 1 / (D * D) * pb2 * ue_p1[1]};
        ev.add_eq("(pb1)_x printed", V2{ev.d("pb1_1", Axis::X), ev.d("pb1_2", Axis::X)}, rb_printed, true);
    });
    return ev.finish();
}

ResidualReport compute_residuals(const SolutionField& f, int stencil, double margin)
{
    switch (f.id) {
    case Case::A2_10:
        return residual_A2(f, stencil, margin);
    case Case::B2_10:
        return residual_B2_10(f, stencil, margin);
    case Case::B2_01:
        return residual_B2_01(f, stencil, margin);
    case Case::G2_01:
        return residual_G2_01(f, stencil, margin);
    case Case::G2_10:
        return residual_G2_10(f, stencil, margin);
    }
    throw InvalidParameter("compute_residuals: unknown case");
}

// ---------------------------------------------------------------- convergence

ConvergenceReport convergence_order(const std::vector<ResidualReport>& reports)
{
    if (reports.size() < 3)
        throw InvalidParameter("convergence_order needs at least three spacings");
    ConvergenceReport c;
    c.id = reports[0].id;
    c.stencil = reports[0].stencil;
    c.reports = reports;
    for (const auto& r : reports) {
        if (r.id != c.id || r.stencil != c.stencil)
            throw InvalidParameter("convergence_order: reports mix cases or stencils");
        if (r.equations.size() != reports[0].equations.size())
            throw InvalidParameter("convergence_order: reports have different equations");
        c.spacings.push_back(std::max(r.hx, r.hy));
    }
    for (std::size_t k = 1; k < c.spacings.size(); ++k)
        if (!(c.spacings[k] < c.spacings[k - 1]))
            throw InvalidParameter("convergence_order: spacings must decrease");

    const std::size_t n = reports.size();
    for (std::size_t e = 0; e < reports[0].equations.size(); ++e) {
        OrderEstimate o;
        o.name = reports[0].equations[e].name;
        o.diagnostic = reports[0].equations[e].diagnostic;
        for (const auto& r : reports)
            o.residuals.push_back(r.equations[e].value);
        std::vector<double> orders;
        for (std::size_t k = n - 2; k < n; ++k) {
            double coarse = o.residuals[k - 1], fine = o.residuals[k];
            if (fine <= kRoundingFloor || coarse <= kRoundingFloor)
                continue;
            orders.push_back(std::log(coarse / fine) / std::log(c.spacings[k - 1] / c.spacings[k]));
        }
        if (orders.empty())
            o.saturated = o.residuals.back() <= 10 * kRoundingFloor;
        else
            o.order = std::accumulate(orders.begin(), orders.end(), 0.0) / static_cast<double>(orders.size());
        c.equations.push_back(o);
    }
    return c;
}

ConvergenceReport run_ladder(Case c, const Algebra& a, const CoefficientSet& coeffs, const std::vector<Grid>& grids,
                             int stencil, const GenerateOptions& opt, SolutionField* finest)
{
    if (grids.empty())
        throw InvalidParameter("run_ladder: no grids");
    const double margin = stencil_halfwidth(stencil) * std::max(grids.front().hx(), grids.front().hy());
    std::vector<ResidualReport> reports;
    for (std::size_t k = 0; k < grids.size(); ++k) {
        auto f = generate_field(c, a, coeffs, grids[k], opt);
        if (std::all_of(f.singular.begin(), f.singular.end(), [](char s) { return s != 0; }))
            throw SingularElement(fmt::format("every node of the {}x{} grid is singular", grids[k].nx, grids[k].ny));
        reports.push_back(compute_residuals(f, stencil, margin));
        if (finest && k + 1 == grids.size())
            *finest = std::move(f);
    }
    if (reports.size() < 3) {
        ConvergenceReport r;
        r.id = c;
        r.stencil = stencil;
        for (const auto& x : reports)
            r.spacings.push_back(std::max(x.hx, x.hy));
        r.reports = reports;
        return r;
    }
    return convergence_order(reports);
}

std::vector<Grid> unit_ladder(const std::vector<int>& nodes)
{
    std::vector<Grid> g;
    for (int n : nodes) {
        Grid x;
        x.nx = x.ny = n;
        g.push_back(x);
    }
    return g;
}

bool ConvergenceReport::passed(double threshold, double slack) const
{
    for (const auto& e : equations) {
        if (e.diagnostic)
            continue;
        if (!(e.residuals.back() < threshold))
            return false;
        if (!e.saturated && !(e.order && *e.order >= stencil - slack))
            return false;
    }
    return true;
}

bool ConvergenceReport::converging(double threshold, double slack) const
{
    for (const auto& e : equations) {
        if (e.diagnostic)
            continue;
        bool small = e.residuals.back() < threshold;
        bool order = e.saturated || (e.order && *e.order >= stencil - slack);
        if (!small && !order)
            return false;
    }
    return true;
}

} // namespace toda

// ---------------------------------------------------------------- calibration

namespace toda {

double regularity_margin(const SolutionField& f)
{
    double m = std::numeric_limits<double>::infinity();
    const int det = f.channel("det");
    for (std::size_t k = 0; k < f.alpha.size(); ++k) {
        if (f.singular[k])
            return -std::numeric_limits<double>::infinity();
        m = std::min({m, f.channels[static_cast<std::size_t>(det)][k], f.alpha[k].D1, f.alpha[k].D2});
    }
    return m;
}

std::vector<std::uint64_t> regular_seeds(Case c, std::size_t count, std::uint64_t first, double scale, double margin)
{
    auto a = make_algebra(case_info(c).p);
    Grid g;
    g.nx = g.ny = 17;
    std::vector<std::uint64_t> out;
    for (std::uint64_t seed = first; out.size() < count; ++seed) {
        if (seed - first > 1000)
            throw Error("regular_seeds: no regular coefficient draws found");
        auto f = generate_field(c, a, random_polynomial_coefficients(c, seed, scale), g);
        if (regularity_margin(f) >= margin)
            out.push_back(seed);
    }
    return out;
}

namespace {

void decide(CalibrationFinding& f)
{
    std::string winner;
    bool stable = !f.residuals.empty();
    for (const auto& r : f.residuals) {
        std::vector<std::size_t> idx(r.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });
        const std::string& best = f.candidates[idx[0]];
        if (winner.empty())
            winner = best;
        else if (winner != best)
            winner = "-";
        if (!(r[idx[0]] < 1e-6) || (idx.size() > 1 && !(r[idx[1]] > 1e-3)))
            stable = false;
    }
    f.chosen = winner == "-" ? "" : winner;
    f.stable = stable && !f.chosen.empty();
}

std::string perm_name(const std::array<int, 4>& p)
{
    return fmt::format("(P{},P{},P{},P{})", p[0], p[1], p[2], p[3]);
}

} // namespace

std::vector<CalibrationFinding> run_calibration(const std::vector<std::uint64_t>& a2_seeds,
                                                const std::vector<std::uint64_t>& g2_seeds, int n, int stencil,
                                                double scale)
{
    Grid g;
    g.nx = g.ny = n;
    std::vector<CalibrationFinding> out;

    CalibrationFinding a2{"A2(1,0) (2,2) entry", {"X = c1 cb1", "X = c2 cb2 (printed)"}, a2_seeds, {}, "", false};
    auto alg1 = make_algebra(1);
    for (auto seed : a2_seeds) {
        auto f = generate_field(Case::A2_10, alg1, random_polynomial_coefficients(Case::A2_10, seed, scale), g);
        auto r = residual_A2(f, stencil);
        a2.residuals.push_back({r.find("u: X = c1 cb1").value, r.find("u: X = c2 cb2 (printed)").value});
    }
    decide(a2);
    out.push_back(a2);

    CalibrationFinding order{"G2(0,1) ordering of the four P components in the multiplet equations", {}, g2_seeds, {}, "", false};
    CalibrationFinding layout{"G2(0,1) layout of p12 = p21 in the u equation", {}, g2_seeds, {}, "", false};
    auto alg3 = make_algebra(3);
    for (auto seed : g2_seeds) {
        auto f = generate_field(Case::G2_01, alg3, random_polynomial_coefficients(Case::G2_01, seed, scale), g);
        auto scan = g2_01_ordering_scan(f, stencil);
        std::vector<double> r;
        for (const auto& s : scan) {
            if (order.candidates.size() < scan.size())
                order.candidates.push_back(perm_name(s.perm));
            r.push_back(s.value);
        }
        order.residuals.push_back(r);
        auto lay = g2_01_layout_scan(f, stencil);
        std::vector<double> rl;
        for (const auto& l : lay) {
            if (layout.candidates.size() < lay.size())
                layout.candidates.push_back(l.layout);
            rl.push_back(l.value);
        }
        layout.residuals.push_back(rl);
    }
    decide(order);
    decide(layout);
    out.push_back(order);
    out.push_back(layout);
    return out;
}

} // namespace toda
