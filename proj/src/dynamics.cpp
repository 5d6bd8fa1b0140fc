#include "toda/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "toda/multiplets.hpp"

namespace toda {

// ---------------------------------------------------------------- coefficient functions

CoefficientFunction CoefficientFunction::polynomial(std::vector<double> a)
{
    CoefficientFunction f;
    f.kind = Kind::Polynomial;
    f.poly = a.empty() ? std::vector<double>{0.0} : std::move(a);
    return f;
}

CoefficientFunction CoefficientFunction::trig(double offset, double amplitude, double frequency, double phase)
{
    CoefficientFunction f;
    f.kind = Kind::Trig;
    f.offset = offset;
    f.amplitude = amplitude;
    f.frequency = frequency;
    f.phase = phase;
    return f;
}

namespace {

std::vector<double> parse_list(const std::string& body, const std::string& whole)
{
    std::vector<double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InvalidParameter("coefficient function: bad number '" + item + "' in '" + whole + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
            ++used;
        if (used != item.size())
            throw InvalidParameter("coefficient function: bad number '" + item + "' in '" + whole + "'");
        out.push_back(v);
    }
    return out;
}

} // namespace

CoefficientFunction CoefficientFunction::parse(const std::string& s)
{
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw InvalidParameter("coefficient function: expected 'poly:...' or 'trig:...', got '" + s + "'");
    std::string kind = s.substr(0, colon);
    auto vals = parse_list(s.substr(colon + 1), s);
    if (kind == "poly") {
        if (vals.empty())
            throw InvalidParameter("coefficient function: empty polynomial in '" + s + "'");
        return polynomial(vals);
    }
    if (kind == "trig") {
        if (vals.size() != 4)
            throw InvalidParameter("coefficient function: trig takes offset,amplitude,frequency,phase in '" + s + "'");
        return trig(vals[0], vals[1], vals[2], vals[3]);
    }
    throw InvalidParameter("coefficient function: unknown kind '" + kind + "'");
}

double CoefficientFunction::value(double t) const
{
    if (kind == Kind::Trig)
        return offset + amplitude * std::sin(frequency * t + phase);
    double s = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it)
        s = s * t + *it;
    return s;
}

double CoefficientFunction::derivative(double t) const
{
    if (kind == Kind::Trig)
        return amplitude * frequency * std::cos(frequency * t + phase);
    double s = 0;
    for (std::size_t k = poly.size(); k-- > 1;)
        s = s * t + static_cast<double>(k) * poly[k];
    return s;
}

std::string CoefficientFunction::describe() const
{
    if (kind == Kind::Trig)
        return fmt::format("trig:{},{},{},{}", offset, amplitude, frequency, phase);
    return fmt::format("poly:{}", fmt::join(poly, ","));
}

bool CoefficientFunction::is_zero() const
{
    if (kind == Kind::Trig)
        return offset == 0 && amplitude == 0;
    return std::all_of(poly.begin(), poly.end(), [](double a) { return a == 0; });
}

CoefficientFunction CoefficientFunction::scaled(double s) const
{
    CoefficientFunction f = *this;
    for (auto& a : f.poly)
        a *= s;
    f.offset *= s;
    f.amplitude *= s;
    return f;
}

// ---------------------------------------------------------------- slots

std::string bar_name(const std::string& name)
{
    if (name.empty())
        throw InvalidParameter("bar_name: empty slot name");
    return name.substr(0, 1) + "b" + name.substr(1);
}

std::vector<std::string> coefficient_slots(Case c)
{
    switch (c) {
    case Case::A2_10:
        return {"c1", "c2"};
    case Case::B2_10:
        return {"c1", "c2", "c^2"};
    case Case::B2_01:
        return {"d1", "d2", "d3"};
    case Case::G2_01:
        return {"d1", "d2", "d3", "d4", "d^2"};
    case Case::G2_10:
        return {"c^1_1", "c^1_2", "c^2", "c^3_1", "c^3_2"};
    }
    throw InvalidParameter("coefficient_slots: unknown case");
}

std::vector<std::string> coefficient_slots(Case c, Side side)
{
    auto s = coefficient_slots(c);
    if (side == Side::Plus)
        for (auto& n : s)
            n = bar_name(n);
    return s;
}

const CoefficientFunction& CoefficientSet::at(const std::string& name) const
{
    auto it = f.find(name);
    if (it == f.end())
        throw InvalidParameter("coefficient set for " + case_info(id).name + " has no slot '" + name + "'");
    return it->second;
}

std::vector<double> CoefficientSet::values(Side side, double t) const
{
    std::vector<double> v;
    for (const auto& n : coefficient_slots(id, side))
        v.push_back(at(n).value(t));
    return v;
}

CoefficientSet zero_coefficients(Case c)
{
    CoefficientSet s;
    s.id = c;
    for (Side side : {Side::Minus, Side::Plus})
        for (const auto& n : coefficient_slots(c, side))
            s.f[n] = CoefficientFunction::constant(0);
    return s;
}

CoefficientSet random_polynomial_coefficients(Case c, std::uint64_t seed, double scale)
{
    std::mt19937_64 rng(seed);
    auto draw = [&] {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0,1)
        return scale * (2 * u - 1);
    };
    CoefficientSet s;
    s.id = c;
    for (Side side : {Side::Minus, Side::Plus})
        for (const auto& n : coefficient_slots(c, side)) {
            double a0 = draw(), a1 = draw(), a2 = draw();
            s.f[n] = CoefficientFunction::polynomial({a0, a1, a2});
        }
    if (c == Case::G2_10) {
        s.f["c^3_2"] = CoefficientFunction::constant(0);
        s.f["cb^3_2"] = CoefficientFunction::constant(0);
    }
    return s;
}

// ---------------------------------------------------------------- L operators

namespace {

struct WordTemplate {
    std::string slot;
    Rational factor;
    GenExpr plus;
};

GenExpr E(int i) { return GenExpr::raise(i); }
GenExpr br(GenExpr a, GenExpr b) { return GenExpr::br(std::move(a), std::move(b)); }

std::vector<WordTemplate> plus_words(Case c)
{
    switch (c) {
    case Case::A2_10:
        return {{"c1", 1, E(1)}, {"c2", 1, br(E(2), E(1))}};
    case Case::B2_10:
        return {{"c1", 1, E(1)}, {"c2", 1, br(E(2), E(1))}, {"c^2", 1, br(br(E(2), E(1)), E(1))}};
    case Case::B2_01:
        return {{"d1", 1, E(2)}, {"d2", 1, br(E(1), E(2))}, {"d3", Rational(1, 2), br(E(1), br(E(1), E(2)))}};
    case Case::G2_01: {
        GenExpr a = br(E(1), E(2)), b = br(E(1), a), cc = br(E(1), b), e = br(E(2), cc);
        return {{"d1", 1, E(2)},
                {"d2", 1, a},
                {"d3", Rational(1, 2), b},
                {"d4", Rational(1, 6), cc},
                {"d^2", Rational(1, 3), e}};
    }
    case Case::G2_10: {
        GenExpr a = br(E(1), E(2)), b = br(E(1), a), cc = br(E(1), b), e = br(E(2), cc);
        return {{"c^1_1", 1, E(1)}, {"c^1_2", 1, a}, {"c^2", 1, b}, {"c^3_1", 1, cc}, {"c^3_2", 1, e}};
    }
    }
    throw InvalidParameter("build_l_operator: unknown case");
}

} // namespace

LOperatorSpec build_l_operator(Case c, Side side, const CoefficientSet& coeffs, bool gauge_c3_2_zero)
{
    if (coeffs.id != c)
        throw InvalidParameter("build_l_operator: coefficient set is for " + case_info(coeffs.id).name + ", not " +
                               case_info(c).name);
    LOperatorSpec L;
    L.id = c;
    L.side = side;
    for (auto& w : plus_words(c)) {
        if (c == Case::G2_10 && gauge_c3_2_zero && w.slot == "c^3_2")
            continue;
        std::string slot = side == Side::Plus ? bar_name(w.slot) : w.slot;
        GenExpr word = side == Side::Plus ? w.plus : conjugate(w.plus);
        L.terms.push_back({slot, w.factor, std::move(word), coeffs.at(slot)});
    }
    return L;
}

std::vector<DMatrix> LOperatorSpec::word_matrices(const Representation& r) const
{
    std::vector<DMatrix> out;
    for (const auto& t : terms)
        out.push_back(RMatrix(t.factor * evaluate(t.word, r)).map<double>([](const Rational& q) { return q.get_d(); }));
    return out;
}

DMatrix LOperatorSpec::at(const std::vector<DMatrix>& words, double t) const
{
    if (words.size() != terms.size() || words.empty())
        throw DimensionMismatch("LOperatorSpec::at: word matrices do not match the terms");
    DMatrix s(words[0].rows(), words[0].cols());
    for (std::size_t k = 0; k < terms.size(); ++k)
        s += terms[k].f.value(t) * words[k];
    return s;
}

RMatrix LOperatorSpec::exact_at(const Representation& r, const std::map<std::string, Rational>& values) const
{
    RMatrix s(r.dim, r.dim);
    for (const auto& t : terms) {
        auto it = values.find(t.slot);
        if (it == values.end())
            throw InvalidParameter("LOperatorSpec::exact_at: no value for slot '" + t.slot + "'");
        s += Rational(it->second * t.factor) * evaluate(t.word, r);
    }
    return s;
}

// ---------------------------------------------------------------- integration

std::vector<double> Grid::xs() const
{
    std::vector<double> v(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i)
        v[static_cast<std::size_t>(i)] = x(i);
    return v;
}

std::vector<double> Grid::ys() const
{
    std::vector<double> v(static_cast<std::size_t>(ny));
    for (int j = 0; j < ny; ++j)
        v[static_cast<std::size_t>(j)] = y(j);
    return v;
}

std::vector<GroupElement<double>> integrate_M(const Representation& r, Side side, const std::vector<GradeZeroTerm>& g0,
                                              const LOperatorSpec& L, const std::vector<double>& abscissae, double tol)
{
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<double>;

    if (!(tol > 0))
        throw InvalidParameter("integrate_M: tol must be positive");
    if (abscissae.empty())
        throw InvalidParameter("integrate_M: no abscissae");
    for (double t : abscissae)
        if (!std::isfinite(t))
            throw InvalidParameter("integrate_M: interval must be finite");
    for (std::size_t k = 1; k < abscissae.size(); ++k)
        if (abscissae[k] < abscissae[k - 1])
            throw InvalidParameter("integrate_M: abscissae must be non-decreasing");
    if (L.side != side)
        throw InvalidParameter("integrate_M: L operator is for the other side");

    const std::size_t n = r.dim;
    auto words = L.word_matrices(r);
    std::vector<DMatrix> g0m;
    for (const auto& g : g0)
        g0m.push_back(evaluate(g.generator, r).map<double>([](const Rational& q) { return q.get_d(); }));

    DMatrix A(n, n);
    auto coeff = [&](double t) {
        A = L.terms.empty() ? DMatrix(n, n) : L.at(words, t);
        for (std::size_t k = 0; k < g0.size(); ++k)
            A += g0[k].f.value(t) * g0m[k];
    };
    auto rhs = [&](const State& m, State& dm, double t) {
        coeff(t);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0;
                if (side == Side::Minus)
                    for (std::size_t k = 0; k < n; ++k)
                        s += m[i * n + k] * A(k, j);
                else
                    for (std::size_t k = 0; k < n; ++k)
                        s += A(i, k) * m[k * n + j];
                dm[i * n + j] = s;
            }
    };

    State m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        m[i * n + i] = 1;
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());

    auto snapshot = [&](double t) {
        DMatrix M(n, n);
        for (std::size_t i = 0; i < n * n; ++i)
            M.data()[i] = m[i];
        return GroupElement<double>{&r, std::move(M),
                                    fmt::format("M{} at {}", side == Side::Plus ? "+" : "-", t)};
    };

    std::vector<GroupElement<double>> out;
    double t = abscissae.front();
    double dt = std::max(1e-3, (abscissae.back() - t) / 64);
    out.push_back(snapshot(t));
    for (std::size_t k = 1; k < abscissae.size(); ++k) {
        const double target = abscissae[k];
        while (t < target) {
            const double span = target - t;
            bool last = dt >= span;
            double h = last ? span : dt;
            double t_before = t;
            auto res = stepper.try_step(rhs, m, t, h);
            if (res == odeint::success) {
                if (last)
                    t = target; // land exactly on the abscissa
                // h now holds the proposed next step
                dt = std::max(h, last ? dt : h);
            } else {
                dt = h;
                double floor = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_before));
                if (dt < floor)
                    throw IntegrationFailure("integrate_M: step size underflow", t_before);
            }
        }
        out.push_back(snapshot(target));
    }
    return out;
}

// ---------------------------------------------------------------- fields

int SolutionField::channel(const std::string& name) const
{
    for (std::size_t k = 0; k < channel_names.size(); ++k)
        if (channel_names[k] == name)
            return static_cast<int>(k);
    throw InvalidParameter("SolutionField: no channel '" + name + "'");
}

DMatrix SolutionField::u(int i, int j) const
{
    DMatrix m(2, 2);
    m(0, 0) = at(0, i, j);
    m(0, 1) = at(1, i, j);
    m(1, 0) = at(2, i, j);
    m(1, 1) = at(3, i, j);
    return m;
}

std::vector<std::string> multiplet_channels(Case c)
{
    switch (c) {
    case Case::A2_10:
    case Case::B2_01:
        return {};
    case Case::B2_10:
        return {"p1", "p2", "pb1", "pb2"};
    case Case::G2_01:
        return {"P1", "P2", "P3", "P4", "Pb1", "Pb2", "Pb3", "Pb4", "q1", "q2", "Pq", "qb1", "qb2", "Pqb"};
    case Case::G2_10:
        return {"p1_1", "p1_2", "p2", "pb1_1", "pb1_2", "pb2", "p1_2_printed", "pb1_2_printed"};
    }
    throw InvalidParameter("multiplet_channels: unknown case");
}

namespace {

// Cached double bra/ket vectors so each node costs only dense products.
class VectorCache {
public:
    explicit VectorCache(const Algebra& a) : a_(a) {}

    const std::vector<double>& bra(int j, const Word& w) { return get(bras_, j, w, true); }
    const std::vector<double>& ket(int j, const Word& w) { return get(kets_, j, w, false); }

private:
    using Key = std::pair<int, Word>;
    const std::vector<double>& get(std::map<Key, std::vector<double>>& m, int j, const Word& w, bool is_bra)
    {
        auto it = m.find({j, w});
        if (it != m.end())
            return it->second;
        auto q = is_bra ? bra_vector(a_.rep(j), w) : ket_vector(a_.rep(j), w);
        std::vector<double> v(q.size());
        for (std::size_t k = 0; k < q.size(); ++k)
            v[k] = q[k].get_d();
        return m.emplace(Key{j, w}, std::move(v)).first->second;
    }

    const Algebra& a_;
    std::map<Key, std::vector<double>> bras_, kets_;
};

int red_root(Case c)
{
    const auto& info = case_info(c);
    return info.c[0] == 0 ? 1 : 2;
}

template <std::size_t N>
std::array<double, N> slot_values(const CoefficientSet& s, Side side, double t)
{
    auto v = s.values(side, t);
    std::array<double, N> out{};
    for (std::size_t k = 0; k < N && k < v.size(); ++k)
        out[k] = v[k];
    return out;
}

} // namespace

SolutionField assemble_fields(Case c, const Algebra& a, const std::array<std::vector<GroupElement<double>>, 2>& mplus,
                              const std::array<std::vector<GroupElement<double>>, 2>& mminus, const Grid& grid,
                              const CoefficientSet& coeffs)
{
    if (a.cd.p != case_info(c).p)
        throw InvalidParameter("assemble_fields: algebra does not match the case");
    for (int r = 0; r < 2; ++r)
        if (mplus[r].size() != static_cast<std::size_t>(grid.ny) || mminus[r].size() != static_cast<std::size_t>(grid.nx))
            throw DimensionMismatch("assemble_fields: paths do not share the grid abscissae");

    SolutionField f;
    f.id = c;
    f.grid = grid;
    f.coeffs = coeffs;
    f.channel_names = {"u11", "u12", "u21", "u22", "det"};
    for (auto& n : multiplet_channels(c))
        f.channel_names.push_back(n);
    const std::size_t nodes = static_cast<std::size_t>(grid.nx) * grid.ny;
    f.channels.assign(f.channel_names.size(), std::vector<double>(nodes, 0.0));
    f.alpha.resize(nodes);
    f.singular.assign(nodes, 0);

    const int R = red_root(c);
    const bool g2 = case_info(c).p == 3;
    VectorCache cache(a);
    std::array<DMatrix, 2> K;

    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t node = f.node(i, j);
            for (int r = 0; r < 2; ++r)
                K[r] = mplus[r][static_cast<std::size_t>(j)].M * mminus[r][static_cast<std::size_t>(i)].M;
            ElementSource<double> el = [&](int rep, const Word& bra, const Word& ket) {
                const auto& b = cache.bra(rep, bra);
                const auto& k = cache.ket(rep, ket);
                const DMatrix& M = K[rep - 1];
                double s = 0;
                for (std::size_t x = 0; x < b.size(); ++x) {
                    if (b[x] == 0)
                        continue;
                    double row = 0;
                    for (std::size_t y = 0; y < k.size(); ++y)
                        row += M(x, y) * k[y];
                    s += b[x] * row;
                }
                return s;
            };

            double u11 = el(R, {}, {}), u12 = el(R, {}, {R}), u21 = el(R, {R}, {}), u22 = el(R, {R}, {R});
            double det = u11 * u22 - u12 * u21;
            std::vector<double> vals = {u11, u12, u21, u22, det};
            bool singular = !(std::abs(det) > 1e-12) || !std::isfinite(det);
            if (c == Case::G2_10 && !(det > 0))
                singular = true;

            AlphaTable<double> t{};
            try {
                t = alpha_table<double>(el, a.cd, g2);
            } catch (const SingularElement&) {
                singular = true;
            }

            const double x = grid.x(i), y = grid.y(j);
            if (!singular) {
                switch (c) {
                case Case::A2_10:
                case Case::B2_01:
                    break;
                case Case::B2_10: {
                    auto cm = coeffs.values(Side::Minus, x);
                    auto cp = coeffs.values(Side::Plus, y);
                    auto p = b2_10_p(t, cm[0], cm[1], cm[2]);
                    auto pb = b2_10_pbar(t, cp[0], cp[1], cp[2]);
                    vals.insert(vals.end(), {p[0], p[1], pb[0], pb[1]});
                    break;
                }
                case Case::G2_01: {
                    auto d = slot_values<5>(coeffs, Side::Minus, x);
                    auto db = slot_values<5>(coeffs, Side::Plus, y);
                    auto P = g2_01_P(t, d);
                    auto Pb = g2_01_Pbar(t, db);
                    auto l = g2_01_lines(P, t.a1);
                    auto lb = g2_01_lines(Pb, t.ab1);
                    vals.insert(vals.end(), {P[0], P[1], P[2], P[3], Pb[0], Pb[1], Pb[2], Pb[3], l.q1, l.q2, l.Pq,
                                             lb.q1, lb.q2, lb.Pq});
                    break;
                }
                case Case::G2_10: {
                    auto cm = slot_values<5>(coeffs, Side::Minus, x);
                    auto cp = slot_values<5>(coeffs, Side::Plus, y);
                    auto p1 = g2_10_p1(t, cm);
                    auto pb1 = g2_10_p1bar(t, cp);
                    auto p1_printed = g2_10_p1(t, cm, -1.0);
                    auto pb1_printed = g2_10_p1bar(t, cp, -1.0);
                    vals.insert(vals.end(), {p1[0], p1[1], g2_10_p2(t, cm), pb1[0], pb1[1], g2_10_p2bar(t, cp),
                                             p1_printed[1], pb1_printed[1]});
                    break;
                }
                }
            }
            vals.resize(f.channel_names.size(), std::numeric_limits<double>::quiet_NaN());
            for (std::size_t ch = 0; ch < vals.size(); ++ch)
                f.channels[ch][node] = vals[ch];
            f.alpha[node] = t;
            f.singular[node] = singular ? 1 : 0;
        }
    return f;
}

SolutionField generate_field(Case c, const Algebra& a, const CoefficientSet& coeffs, const Grid& grid,
                             const GenerateOptions& opt)
{
    auto Lm = build_l_operator(c, Side::Minus, coeffs, opt.gauge_c3_2_zero);
    auto Lp = build_l_operator(c, Side::Plus, coeffs, opt.gauge_c3_2_zero);
    auto xs = grid.xs(), ys = grid.ys();
    std::array<std::vector<GroupElement<double>>, 2> mp, mm;
    for (int r = 1; r <= 2; ++r) {
        mm[r - 1] = integrate_M(a.rep(r), Side::Minus, opt.a0, Lm, xs, opt.tol);
        mp[r - 1] = integrate_M(a.rep(r), Side::Plus, opt.b0, Lp, ys, opt.tol);
    }
    auto f = assemble_fields(c, a, mp, mm, grid, coeffs);
    f.gauge_c3_2_zero = opt.gauge_c3_2_zero;
    f.grade_zero_trivial = opt.a0.empty() && opt.b0.empty();
    return f;
}

void write_field_csv(std::ostream& os, const SolutionField& f)
{
    os << "x,y";
    for (const auto& n : f.channel_names)
        os << ',' << n;
    os << ",singular\n";
    for (int i = 0; i < f.grid.nx; ++i)
        for (int j = 0; j < f.grid.ny; ++j) {
            fmt::print(os, "{},{}", f.grid.x(i), f.grid.y(j));
            for (std::size_t ch = 0; ch < f.channels.size(); ++ch)
                fmt::print(os, ",{}", f.channels[ch][f.node(i, j)]);
            fmt::print(os, ",{}\n", static_cast<int>(f.singular[f.node(i, j)]));
        }
}

} // namespace toda
