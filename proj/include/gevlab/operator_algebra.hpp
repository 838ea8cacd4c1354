#pragma once

#include <string>
#include <vector>

#include "gevlab/params.hpp"

namespace gevlab {

// 1/Q(tau) = sum_j residues[j] / (tau - poles[j]) for a factor Q of degree k*s.
struct PartialFraction {
    std::vector<cplx> poles;
    std::vector<cplx> residues;
    double eps_scaling_exponent = 0.0;

    cplx eval(cplx tau) const;
    double min_pole_gap() const;
};

// Q(tau) = (k tau^k)^{s2} + a2.
PartialFraction partial_fraction_fixed(const ProblemParams& p);
// Q(tau) = eps^{r1 - s1 r k} (k tau^k)^{s1} + a1, fractional powers on the branch of `eps`.
PartialFraction partial_fraction_movable(const ProblemParams& p, const EpsPoint& eps);

cplx fixed_factor(const ProblemParams& p, cplx tau);
cplx movable_factor(const ProblemParams& p, const EpsPoint& eps, cplx tau);

// T^{kappa0(k+1)} d_T^{kappa0} = sum_{p=1}^{kappa0} A_p T^{k(kappa0-p)} (T^{k+1} d_T)^p.
struct EulerExpansion {
    int kappa0 = 1;
    int k = 2;
    std::vector<long long> coefficients;  // coefficients[p-1] = A_{kappa0,p}

    long long A(int p) const { return coefficients.at(p - 1); }
    // n(n-1)...(n-kappa0+1) == sum_p A_p prod_{q<p} (n + q k), in integer arithmetic.
    bool identity_holds(long long n) const;
};

EulerExpansion euler_expansion(int kappa0, int k);

// Fill params.A_table from euler_expansion for every forcing triple.
void populate_euler_table(ProblemParams& p);

// sup_{0 < x <= x_max} of the convolution majorant kernel
//   B(x) = (1+x^2) x^{1-1/k} e^{-c x} int_0^x h^{1/k+xi} (x-h)^nu / (1+h^2) dh,
// with c = sigma (r_b(beta) - r_b(alpha)).
struct KernelSup {
    double value = 0.0;
    double argmax = 0.0;
    bool at_boundary = false;
};
KernelSup convolution_kernel_sup(double nu, double xi, int alpha, int beta, const NormParams& np,
                                 double x_max);

struct BoundSampling {
    std::vector<double> eps_moduli{0.1, 0.05, 0.025};
    int eps_args_per_sector = 3;
    int radial_points = 200;
    int angular_points = 9;
    double radius_max = 20.0;  // in units of |eps|^r
    // Extra sample points checked against Omega(eps) for sector 0 (used by tests).
    std::vector<cplx> extra_points;
};

struct ConvolutionUse {
    double nu;
    double xi;
    int alpha;
    int beta;
};

struct BoundReport {
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    bool ok = true;
    std::string grid;
    std::string label = "empirical estimate";
    std::vector<double> C2_per_eps;
};

BoundReport estimate_bounds(const GeometryConfig& g, const ProblemParams& p,
                            const BoundSampling& s, const std::vector<ConvolutionUse>& uses = {});

}  // namespace gevlab
