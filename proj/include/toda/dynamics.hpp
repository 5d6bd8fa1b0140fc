#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "toda/generators.hpp"
#include "toda/grading.hpp"
#include "toda/identities.hpp"

namespace toda {

// Closed-form scalar function of one variable: a polynomial a0 + a1 t + ...,
// or offset + amplitude·sin(frequency·t + phase).
struct CoefficientFunction {
    enum class Kind { Polynomial, Trig };
    Kind kind = Kind::Polynomial;
    std::vector<double> poly;
    double offset = 0, amplitude = 0, frequency = 0, phase = 0;

    static CoefficientFunction polynomial(std::vector<double> a);
    static CoefficientFunction constant(double v) { return polynomial({v}); }
    static CoefficientFunction trig(double offset, double amplitude, double frequency, double phase);
    // "poly:a0,a1,..." or "trig:offset,amplitude,frequency,phase"
    static CoefficientFunction parse(const std::string& s);

    double value(double t) const;
    double derivative(double t) const;
    std::string describe() const; // inverse of parse, round-trip exact
    bool is_zero() const;
    CoefficientFunction scaled(double s) const;
};

enum class Side { Plus, Minus };

// Unbarred names belong to L⁻ (functions of x), barred ones to L⁺ (of y).
// Barred name: second character 'b' inserted ("c1" -> "cb1", "d^2" -> "db^2").
std::string bar_name(const std::string& name);
std::vector<std::string> coefficient_slots(Case c); // unbarred, in the case's fixed order
std::vector<std::string> coefficient_slots(Case c, Side side);

struct CoefficientSet {
    Case id = Case::A2_10;
    std::map<std::string, CoefficientFunction> f;

    const CoefficientFunction& at(const std::string& name) const;
    // values of the case's slots (unbarred at x for Minus, barred at y for Plus)
    std::vector<double> values(Side side, double t) const;
};

CoefficientSet zero_coefficients(Case c);
// the default draw: coefficients in [-1/5, 1/5]
inline constexpr double kDefaultCoefficientScale = 0.2;
// degree-≤2 polynomials with coefficients drawn uniformly from [-scale, scale]
// out of std::mt19937_64(seed) raw outputs (53-bit mantissa).
CoefficientSet random_polynomial_coefficients(Case c, std::uint64_t seed, double scale = kDefaultCoefficientScale);

struct LTerm {
    std::string slot;
    Rational factor;
    GenExpr word;
    CoefficientFunction f;
};

struct LOperatorSpec {
    Case id = Case::A2_10;
    Side side = Side::Plus;
    std::vector<LTerm> terms;

    DMatrix at(const std::vector<DMatrix>& words, double t) const;
    std::vector<DMatrix> word_matrices(const Representation& r) const;
    RMatrix exact_at(const Representation& r, const std::map<std::string, Rational>& values) const;
};

// L⁺ per case; L⁻ is its hermitian conjugate with barred slots
// replaced by unbarred ones. `gauge_c3_2_zero` drops the c³₂ word of G2(1,0).
LOperatorSpec build_l_operator(Case c, Side side, const CoefficientSet& coeffs, bool gauge_c3_2_zero = true);

struct GradeZeroTerm {
    CoefficientFunction f;
    GenExpr generator; // a Cartan element or a red-root generator
};

struct Grid {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    int nx = 33, ny = 33;

    double hx() const { return (x1 - x0) / (nx - 1); }
    double hy() const { return (y1 - y0) / (ny - 1); }
    double x(int i) const { return x0 + i * hx(); }
    double y(int j) const { return y0 + j * hy(); }
    std::vector<double> xs() const;
    std::vector<double> ys() const;
};

// M⁺_y = (B⁰ + L⁺)M⁺ or M⁻_x = M⁻(A⁰ + L⁻), M(start) = I, by an embedded
// Runge-Kutta-Fehlberg 7(8) pair with error control abs = rel = tol.
// Returns M at every abscissa (the first must equal the start point).
std::vector<GroupElement<double>> integrate_M(const Representation& r, Side side, const std::vector<GradeZeroTerm>& g0,
                                              const LOperatorSpec& L, const std::vector<double>& abscissae, double tol);

struct SolutionField {
    Case id = Case::A2_10;
    Grid grid;
    CoefficientSet coeffs;
    bool gauge_c3_2_zero = true;
    bool grade_zero_trivial = true;
    std::vector<std::string> channel_names;
    std::vector<std::vector<double>> channels; // [channel][i*ny + j]
    std::vector<AlphaTable<double>> alpha;     // per node
    std::vector<char> singular;                // per node

    std::size_t node(int i, int j) const { return static_cast<std::size_t>(i) * grid.ny + j; }
    int channel(const std::string& name) const;
    double at(int ch, int i, int j) const { return channels[ch][node(i, j)]; }
    DMatrix u(int i, int j) const;
};

// per-case multiplet channel names, after u11,u12,u21,u22,det
std::vector<std::string> multiplet_channels(Case c);

// K = M⁺(y) M⁻(x) at every node; u over the u_basis of the case, α-table,
// multiplets. Paths are indexed [rep-1][abscissa].
SolutionField assemble_fields(Case c, const Algebra& a, const std::array<std::vector<GroupElement<double>>, 2>& mplus,
                              const std::array<std::vector<GroupElement<double>>, 2>& mminus, const Grid& grid,
                              const CoefficientSet& coeffs);

struct GenerateOptions {
    double tol = 1e-12;
    bool gauge_c3_2_zero = true;
    std::vector<GradeZeroTerm> a0, b0;
};

// Convenience: build L±, integrate both sides in both representations, assemble.
SolutionField generate_field(Case c, const Algebra& a, const CoefficientSet& coeffs, const Grid& grid,
                             const GenerateOptions& opt = {});

void write_field_csv(std::ostream& os, const SolutionField& f);

} // namespace toda
