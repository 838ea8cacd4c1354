#pragma once

#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "gevlab/params.hpp"
#include "gevlab/radial.hpp"

namespace gevlab {

// The engine works in the scaled Borel variable tau' = tau / eps^r. There every power of eps
// in the recursion is an integer, so the coefficients do not depend on the branch of arg eps:
//   P1(tau') = eps^{r2} (k tau'^k)^{s2} + a2,   P2(tau') = eps^{r1} (k tau'^k)^{s1} + a1.
// The Laplace ray for a sector ray gamma is gamma - r * arg(eps) in this variable.

struct NormValue {
    double value = 0.0;
    int argmax = -1;
    bool at_boundary = false;  // maximum attained at the last node
};

// max over nodes of ((1+x^{2k})/x) exp(-sigma r_b(beta) x^k) |h|, x = |tau| / tau_scale.
NormValue weighted_norm(const CVec& values, const RadialGrid& grid, int beta, const NormParams& np,
                        double tau_scale = 1.0);

// tau^k int_0^{tau^k} (tau^k - s)^nu s^xi f(s^{1/k}) ds at node m.
cplx convolution_step(const CVec& f, const RadialGrid& grid, double nu, double xi, int k, int m);

struct ScaledPrefactors {
    cplx eps;
    ProblemParams params;
    std::vector<cplx> fixed_poles;
    std::vector<cplx> movable_poles;

    static ScaledPrefactors make(const ProblemParams& p, cplx eps);
    cplx fixed(cplx tau) const;
    cplx movable(cplx tau) const;
    std::vector<cplx> all_poles() const;
};

// One convolution kernel of a forcing triple: coeff * Conv_{nu, xi}.
struct KernelTerm {
    double nu;
    double xi;
    double coeff;      // k^{kappa0}/Gamma(delta/k) for the main term, A_p k^p/Gamma(nu_p + 1) otherwise
    double majorant;   // |coeff|
    // xi = -1: applied as Conv_{nu, 1/k - 1}(f / tau), which is the same integral.
    bool divide_by_tau = false;
};

struct TripleKernels {
    ForcingTerm f;
    std::vector<KernelTerm> terms;
};

// Requires params.A_table to be populated for triples with kappa0 >= 2.
std::vector<TripleKernels> kernel_terms(const ProblemParams& p);

// b_{kappa0 kappa1 alpha0}(eps) and its bound sum_j |c_j| |eps|^j.
cplx b_value(const ProblemParams& p, const ForcingTerm& f, int alpha0, cplx eps);
double b_bound(const ProblemParams& p, const ForcingTerm& f, int alpha0, double eps_abs);

struct CoefficientTable {
    EpsPoint eps;
    double gamma = 0.0;  // scaled ray angle
    int beta_max = 0;
    std::shared_ptr<const RadialGrid> grid;
    std::vector<CVec> entries;  // W_beta at the nodes
    std::vector<NormValue> norms;
    // Conv_{term}(W_alpha) keyed by (kernel index, alpha).
    std::map<std::pair<int, int>, CVec> conv_cache;
};

class CoefficientEngine {
public:
    CoefficientEngine(const ProblemParams& p, const EpsPoint& eps, double gamma_scaled, double r_max,
                      const RadialGridSpec& spec = {}, Exec exec = Exec::Parallel);

    const RadialGrid& grid() const { return *grid_; }
    std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
    const ScaledPrefactors& prefactors() const { return pre_; }
    cplx eps() const { return eps_.value(); }

    CoefficientTable start(const std::vector<CVec>& initial, int beta_max) const;
    // Nodal values of the initial data W_j, j < S.
    std::vector<CVec> sample(const std::vector<InitialDatum>& data) const;
    // Fills entries[beta + S].
    void recursion_step(CoefficientTable& table, int beta) const;
    CoefficientTable compute(const std::vector<CVec>& initial, int beta_max) const;
    CoefficientTable compute(const std::vector<InitialDatum>& data, int beta_max) const;
    // Norms of the initial data over the whole ray (dense sampling, not just the grid).
    std::vector<double> initial_norms(const std::vector<InitialDatum>& data) const;

private:
    ProblemParams p_;
    EpsPoint eps_;
    NormParams np_;
    ScaledPrefactors pre_;
    std::shared_ptr<const RadialGrid> grid_;
    CVec inv_prefactor_;
    std::vector<TripleKernels> kernels_;
    std::vector<std::pair<int, int>> kernel_index_;  // (triple, term) of each operator
    std::vector<ConvolutionOperator> ops_;
};

// sup of 1/|P1| and 1/|P2| along the whole scaled ray, by dense sampling refined at the
// projections of the poles.
struct RayPrefactorBounds {
    double C1 = 0.0;
    double C2 = 0.0;
};
RayPrefactorBounds ray_prefactor_bounds(const ScaledPrefactors& pre, double gamma);

struct MajorantConstants {
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double C41 = 0.0;
    double C4() const { return C1 * C2 * C3; }
};

// b(delta/k + kappa0) - floor: number of falling-factorial factors.
int falling_factorial_length(const ProblemParams& p, const ForcingTerm& f);
// prod_{j < L} max(beta - j, 1).
double falling_factorial(int beta, int L);

// C3 = max over used (alpha, beta+S) of sup B / ratio^e, and C41 = max ratio^e / FF(beta),
// with ratio = (beta+S+1)^b / (beta+S-alpha), e = nu + xi + 3.
MajorantConstants majorant_constants(const ProblemParams& p, double eps_abs, int beta_max,
                                     const RayPrefactorBounds& rb);

struct MajorantTable {
    std::vector<double> u;
    // The majorant problem is linear, so no smallness threshold on the initial data is needed.
    double rho1 = std::numeric_limits<double>::infinity();
    double Z0 = 0.0;
    double M = 0.0;
    double slope_first = 0.0;  // regression slope of log(u/beta!) on the first and last third
    double slope_last = 0.0;
};

MajorantTable majorant_recursion(const std::vector<double>& initial_norms, const ProblemParams& p,
                                 double eps_abs, double C4, double C41, int beta_max);

struct DominationReport {
    std::vector<int> violations;          // beta with w_beta > u_beta
    std::vector<int> envelope_violations; // beta with w_beta > M Z0^beta beta!
    double min_margin = 0.0;              // min over beta with u > 0 of u/w
    double envelope_ratio = 0.0;          // max w_beta / (M Z0^beta beta!)
    bool dominated() const { return violations.empty() && envelope_violations.empty(); }
};

DominationReport verify_domination(const CoefficientTable& table, const MajorantTable& maj);

// Scale C4 down by powers of two until domination fails; returns the first failing factor
// (0 if none up to 2^-60).
double domination_control_factor(const CoefficientTable& table, const std::vector<double>& init,
                                 const ProblemParams& p, double eps_abs, const MajorantConstants& mc);

}  // namespace gevlab
