#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toda/dynamics.hpp"

namespace toda {

enum class Axis { X, Y };

// Central finite differences on a grid function stored [i*ny + j].
// Orders 2 and 4; the 4th-order mixed stencil is the tensor product of the
// 1-D 4th-order first-derivative stencils. Nodes without full support throw.
int stencil_halfwidth(int order);
double first_derivative(const Grid& g, const std::vector<double>& f, int i, int j, Axis axis, int order);
double mixed_derivative(const Grid& g, const std::vector<double>& f, int i, int j, int order);

// Residuals below this are indistinguishable from integrator and rounding noise.
constexpr double kRoundingFloor = 1e-11;

struct EquationResidual {
    std::string name;
    double value = 0;        // max |LHS − RHS| / max(1, max |RHS|) over usable interior nodes
    bool diagnostic = false; // printed variant kept for comparison, not a pass/fail equation
};

struct ResidualReport {
    Case id = Case::A2_10;
    int stencil = 4;
    double hx = 0, hy = 0;
    std::vector<EquationResidual> equations;
    std::vector<std::pair<int, int>> excluded; // singular nodes and nodes whose stencil touches one

    const EquationResidual& find(const std::string& name) const;
    double max_residual() const; // over non-diagnostic equations
};

// Residuals are taken over nodes at distance ≥ `margin` from the boundary of
// the rectangle (a negative margin means the stencil half-width). Convergence
// studies pass the coarsest level's margin so every level covers one region.
// (u⁻¹u_x)_y = det⁻¹u⁻¹[[c₂c̄₂, c₁c̄₂],[c₂c̄₁, X]]; X = c₁c̄₁ is the equation,
// the printed X = c₂c̄₂ is reported as a diagnostic.
ResidualReport residual_A2(const SolutionField& f, int stencil, double margin = -1);
ResidualReport residual_B2_10(const SolutionField& f, int stencil, double margin = -1);
ResidualReport residual_B2_01(const SolutionField& f, int stencil, double margin = -1);
ResidualReport residual_G2_01(const SolutionField& f, int stencil, double margin = -1);
ResidualReport residual_G2_10(const SolutionField& f, int stencil, double margin = -1);
ResidualReport compute_residuals(const SolutionField& f, int stencil, double margin = -1);

// G2(0,1) calibration: residuals of the P equations for every assignment of the
// four P components to the four slots (24 permutations), and of the u equation for the
// two candidate layouts of p¹² = p²¹.
struct PermutationResidual {
    std::array<int, 4> perm; // slot a reads P_{perm[a]}
    double value;
};
std::vector<PermutationResidual> g2_01_ordering_scan(const SolutionField& f, int stencil, double margin = -1);
struct LayoutResidual {
    std::string layout;
    double value;
};
std::vector<LayoutResidual> g2_01_layout_scan(const SolutionField& f, int stencil, double margin = -1);

// Frozen outcomes of the calibration runs below.
inline constexpr const char* kA2Entry = "X = c1 cb1";
inline constexpr std::array<int, 4> kG2Ordering{1, 2, 3, 4};
inline constexpr const char* kG2Layout = "p12 = (P3,P2)";

struct CalibrationFinding {
    std::string question;
    std::vector<std::string> candidates;
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<double>> residuals; // [seed][candidate]
    std::string chosen;                         // best candidate for every seed, or "" when seeds disagree
    bool stable = false;                        // same winner everywhere, winner < 1e-6, runner-up > 1e-3
};

// Regular coefficient draws: random_polynomial_coefficients(c, seed, scale)
// for successive seeds from `first`, keeping those whose fields have det u,
// ⟨1|K|1⟩, ⟨2|K|2⟩ ≥ `margin` at every node of a 17×17 grid.
std::vector<std::uint64_t> regular_seeds(Case c, std::size_t count, std::uint64_t first = 1, double scale = kDefaultCoefficientScale,
                                         double margin = 0.1);
double regularity_margin(const SolutionField& f);

// A2 (2,2) entry, G2(0,1) component ordering and p¹² layout, each decided on
// fields from every given seed (grid n×n, given stencil).
std::vector<CalibrationFinding> run_calibration(const std::vector<std::uint64_t>& a2_seeds,
                                                const std::vector<std::uint64_t>& g2_seeds, int n = 33, int stencil = 4,
                                                double scale = kDefaultCoefficientScale);

struct OrderEstimate {
    std::string name;
    bool diagnostic = false;
    std::vector<double> residuals; // coarse to fine
    std::optional<double> order;   // empty when saturated
    bool saturated = false;
};

struct ConvergenceReport {
    Case id = Case::A2_10;
    int stencil = 4;
    std::vector<double> spacings;
    std::vector<OrderEstimate> equations;
    std::vector<ResidualReport> reports;

    // every non-diagnostic equation has order ≥ stencil − slack (or is
    // saturated) and a finest residual below `threshold`
    bool passed(double threshold, double slack = 0.5) const;
    // weaker run criterion: each equation is below `threshold` at the finest
    // spacing or converges at order ≥ stencil − slack
    bool converging(double threshold, double slack = 0.5) const;
};

// order = mean of log₂(r(h)/r(h/2)) over the two finest pairs; a pair whose
// finer residual is at the rounding floor is dropped, and an equation with no
// pair left is "saturated" (provided its finest residual is within 10× the floor).
ConvergenceReport convergence_order(const std::vector<ResidualReport>& reports);

// Generates the field on every grid of the ladder (coarse to fine) and
// evaluates the residuals over the coarsest grid's interior, so all levels
// measure the same region. Throws IntegrationFailure, and SingularElement
// when every node of a level is singular. `finest` receives the last field.
ConvergenceReport run_ladder(Case c, const Algebra& a, const CoefficientSet& coeffs, const std::vector<Grid>& grids,
                             int stencil, const GenerateOptions& opt = {}, SolutionField* finest = nullptr);
// square ladder on [0,1]² with the given node counts
std::vector<Grid> unit_ladder(const std::vector<int>& nodes);

} // namespace toda
