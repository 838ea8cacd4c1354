#pragma once

#include <vector>

#include "gevlab/coefficient_engine.hpp"
#include "gevlab/params.hpp"
#include "gevlab/radial.hpp"

namespace gevlab {

struct SolverOptions {
    int beta_max = 25;
    RadialGridSpec grid;
    LaplaceSpec laplace;
    double reach_margin = 1.05;  // grid reach relative to laplace_reach
    double tail_tolerance = std::numeric_limits<double>::infinity();
    Exec exec = Exec::Parallel;
};

// Scaled Laplace ray for sector ray gamma at eps: gamma - r * arg(eps) (arg lifted in the sector).
double scaled_ray(const ProblemParams& p, double gamma, const EpsPoint& eps);

// Largest |t| allowed: (Delta / (sigma xi(b)))^{1/k}.
double t_radius(const ProblemParams& p, double Delta);

// X_i(t, z, eps) = sum_{beta <= B} L(W_beta)(eps^r t) z^beta / beta!, stored through the
// Laplace coefficients so that z-derivatives are exact.
struct SolutionField {
    int sector_index = 0;
    double gamma = 0.0;  // physical ray of the sector
    int beta_max = 0;
    std::vector<EpsPoint> eps;
    std::vector<cplx> t;
    std::vector<cplx> z;
    std::vector<double> scaled_gamma;                   // per eps
    std::vector<std::vector<std::vector<cplx>>> coeff;  // [eps][t][beta] = L(W_beta)(eps^r t)
    std::vector<MajorantTable> majorants;               // per eps
    std::vector<double> laplace_error;                  // per eps: max tail of the Laplace cutoffs

    cplx value(int e, int ti, int zi) const;
    // Lambda M (Z0|z|)^{B+1} / (1 - Z0|z|), Lambda = (pi/2)/sin(pi/(2k)) absorbs the factor k.
    double tail(int e, int zi, int k) const;
};

// Coefficient tables for eps along the sector's scaled ray, reaching the Laplace cutoff of |t|.
CoefficientEngine make_engine(const ProblemParams& p, const GeometryConfig& g, int sector,
                              const EpsPoint& eps, double t_abs_max, const SolverOptions& opt);

// Throws DOMAIN when eps is outside the sector, |t| exceeds t_radius, the Laplace cosine
// drops below Delta or |z| >= 1/(2 Z0); TRUNCATION when a tail exceeds the tolerance.
SolutionField assemble_solution(const ProblemParams& p, const GeometryConfig& g, int sector,
                                const std::vector<EpsPoint>& eps, const std::vector<cplx>& t,
                                const std::vector<cplx>& z, const std::vector<InitialDatum>& data,
                                const SolverOptions& opt);

// t_j = exp(u0 + j h) e^{i theta}, j = 0..n-1.
std::vector<cplx> log_line(double theta, double t_min, double h, int n);

struct ResidualOptions {
    int levels = 3;        // steps h, h/2, h/4 of the assembled line (finest = the line's step)
    int pad = 24;          // coarse points kept free on each side
    double quadrature_floor = 0.0;  // added to the budget
};

struct ResidualReport {
    std::vector<double> h;                 // coarse to fine
    std::vector<double> max_relative;      // per level, order-4 stencils
    std::vector<double> observed_order;    // between consecutive levels
    double budget = 0.0;                   // 2 |R4 - R8| + quadrature floor at the finest level
    double stencil_estimate = 0.0;
    double quadrature_floor = 0.0;
    int worst_beta = -1;
    std::vector<std::vector<double>> pointwise;  // [eps][t index of the line] finest-level residual or -1
    bool below_budget() const { return !max_relative.empty() && max_relative.back() <= budget; }
};

// Residual of the coefficient form of the PDE for every beta <= B - S:
//   (eps^{r2} E^{s2} + a2)(eps^{r1} E^{s1} + a1) X_{beta+S}
//     = sum binom(beta, alpha0) b_{alpha0}(eps) t^s d_t^{kappa0} X_{alpha1+kappa1},
// E = t^{k+1} d_t, with centered log-grid stencils. The field's t must come from log_line.
ResidualReport pde_residual(const SolutionField& field, const ProblemParams& p,
                            const ResidualOptions& opt = {});

struct InitialConditionReport {
    double max_relative = 0.0;
    double max_absolute = 0.0;
};

// Compares the beta = j Laplace coefficients with an independent function-based Laplace
// transform of the initial data.
InitialConditionReport initial_condition_check(const SolutionField& field, const ProblemParams& p,
                                               const std::vector<InitialDatum>& data,
                                               const LaplaceSpec& spec);

}  // namespace gevlab
