#pragma once

#include <vector>

#include "gevlab/params.hpp"
#include "gevlab/series.hpp"
#include "gevlab/solver.hpp"

namespace gevlab {

// X(t, z, eps) ~ sum_l H_l(t, z) eps^l / l!, each H_l truncated at t^{t_order} z^{z_order}.
struct EpsilonJet {
    std::vector<Bivariate> H;
    int t_order = 0;
    int z_order = 0;

    static EpsilonJet zero(int ell_max, int t_order, int z_order);
    int ell_max() const { return int(H.size()) - 1; }
    EpsilonJet operator-(const EpsilonJet& o) const;
    EpsilonJet scaled(cplx a) const;
};

struct EpsilonRecursionReport {
    std::vector<double> mismatch;  // per l: max |LHS - RHS| over the compared coefficients
    std::vector<double> scale;     // per l: max coefficient of the terms entering the identity
    double max_mismatch = 0.0;
    double max_relative = 0.0;     // max of mismatch / scale over l with scale above 1e-8 of the largest
    int t_window = 0;              // t^i compared for i <= t_window
    int z_window = 0;              // z^j compared for j <= z_window
};

// Coefficient of eps^l in
//   (eps^{r2} E^{s2} + a2)(eps^{r1} E^{s1} + a1) d_z^S X = sum b_{kappa0 kappa1}(z, eps) t^s d_t^kappa0 d_z^kappa1 X,
// E = t^{k+1} d_t, written for G_l = H_l / l!. Throws TRUNCATION when the compared window is
// empty (z_order < S) or a forcing term lowers the t-degree (s < kappa0).
EpsilonRecursionReport epsilon_recursion_check(const EpsilonJet& jet, const ProblemParams& p);

// z^j parts (j < S) of every H_l for data whose Laplace transforms are polynomials in t:
// scaled monomial or polynomial families with a nonnegative integer eps_power.
// Throws InvalidArgument for other families.
std::vector<std::vector<std::vector<cplx>>> initial_jets(const ProblemParams& p,
                                                         const std::vector<InitialDatum>& data,
                                                         int ell_max, int t_order);

// Solves the recursion forward from the z^j parts (j < S) of each H_l ([l][j] -> t-coefficients).
EpsilonJet formal_jet(const ProblemParams& p,
                      const std::vector<std::vector<std::vector<cplx>>>& initial, int ell_max,
                      int t_order, int z_order);

struct JetFitSpec {
    int sector = 0;             // sector whose assembled solution anchors the continuation
    double eps_radius = 0.01;   // Cauchy circle in eps
    int eps_points = 16;
    double t_radius = 0.5;      // Cauchy circle in t
    int t_points = 24;
    int rays = 8;               // Laplace rays; each t uses the nearest one
    double refit_scale = 0.7;   // both radii shrink by this factor for the budget refit
    int ell_max = 5;
    int t_order = 11;
    int z_order = 10;
};

struct JetFitReport {
    EpsilonJet jet;                     // primary fit
    EpsilonRecursionReport recursion;   // of the primary fit
    EpsilonRecursionReport difference;  // of (primary - refit on smaller circles)
    double budget = 0.0;                // 2 * difference.max_mismatch
    double sector_agreement = 0.0;      // relative gap between continuation and sector assembly
    double formal_deviation = -1.0;     // max |fit - formal| / max |formal| when a formal jet exists
    bool within_budget() const { return recursion.max_mismatch <= budget; }
};

// In the scaled Borel variable eps enters only through integer powers, so the Laplace
// representation continues analytically in eps and t once the ray follows arg t. The
// solution is sampled on the torus |eps| = eps_radius, |t| = t_radius, its z^beta
// coefficients are read from the series form, and the jet comes from a 2-D DFT.
// Throws DOMAIN if a pole comes near one of the rays.
JetFitReport fit_epsilon_jet(const ProblemParams& p, const GeometryConfig& g,
                             const std::vector<InitialDatum>& data, const SolverOptions& opt,
                             const JetFitSpec& spec);

}  // namespace gevlab
