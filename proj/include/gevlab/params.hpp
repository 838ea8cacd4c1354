#pragma once

#include <array>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "gevlab/common.hpp"

namespace gevlab {

// One term t^s d_t^{kappa0} d_z^{kappa1} of the right-hand side.
struct ForcingTerm {
    int s = 0;
    int kappa0 = 0;
    int kappa1 = 0;
};

// Key (kappa0, kappa1, beta) of a z-Taylor coefficient of b_{kappa0 kappa1}(z, eps).
using BKey = std::array<int, 3>;

struct ProblemParams {
    int k = 2;
    int s1 = 1;
    int s2 = 1;
    int r1 = 0;
    int r2 = 1;
    int S = 1;
    cplx a1{1.0, 0.0};
    cplx a2{1.0, 0.0};
    std::vector<ForcingTerm> forcing;
    // Coefficients c_j of b_{kappa0 kappa1 beta}(eps) = sum_j c_j eps^j.
    std::map<BKey, std::vector<cplx>> b_coeffs;
    // Euler-expansion coefficients keyed by (kappa0, p); filled by populate_euler_table.
    std::map<std::pair<int, int>, double> A_table;
    double b_param = 1.1;
    double sigma = 0.01;

    double r() const { return double(r2) / double(s2 * k); }
    // s1*r2 - s2*r1, the gap controlling the movable poles.
    int movable_gap() const { return s1 * r2 - s2 * r1; }
    // Exponent r1 - s1*r*k of eps in the movable factor.
    double movable_eps_exponent() const { return r1 - s1 * r() * k; }
    int delta(const ForcingTerm& f) const { return f.s - f.kappa0 * (k + 1); }
    int max_beta_in_b() const;

    // Throws InvalidArgument when a structural field is out of range.
    void validate() const;
};

// A value of the perturbation parameter together with the branch of arg used
// for every fractional power of it.
struct EpsPoint {
    double modulus = 0.0;
    double arg = 0.0;

    cplx value() const;
    cplx pow(double q) const;
};

// Open sector {|eps| < radius, theta1 < arg eps < theta2}. theta1 lies in [0, 2*pi);
// theta2 may exceed 2*pi so that a sector can straddle the positive real axis.
struct Sector {
    double radius = std::numeric_limits<double>::infinity();
    double theta1 = 0.0;
    double theta2 = 0.0;

    double opening() const { return theta2 - theta1; }
    double bisector() const { return 0.5 * (theta1 + theta2); }
    bool contains(cplx eps) const;
    // arg(eps) lifted to [theta1, theta1 + 2*pi).
    double lift(double arg) const;
    EpsPoint point(double modulus, double arg) const;
};

struct GeometryConfig {
    std::vector<Sector> covering;
    double rho0 = 0.1;
    double delta1 = 0.1;
    double delta2 = 0.1;
    std::vector<double> rays;
    Sector t_sector;
    std::vector<double> sd_directions;
    // Lower bound for cos(k (gamma - arg T)) in every Laplace evaluation.
    double Delta = 0.5;
};

// Initial datum W_j(tau, eps) = eps^{eps_power} * P(u) * exp(-gauss_rate u^k),
// with u = tau or u = tau / eps^r.
struct InitialDatum {
    enum class Family { Zero, Monomial, Polynomial, Gaussian };
    Family family = Family::Zero;
    std::vector<cplx> coeffs;
    double gauss_rate = 0.0;
    bool scaled = false;
    double eps_power = 0.0;

    static InitialDatum zero() { return {}; }
    static InitialDatum monomial(int n, cplx c = 1.0, bool scaled = false);
    bool is_zero() const;
    cplx eval(cplx tau, const EpsPoint& eps, double r, int k) const;
};

struct NormParams {
    double sigma = 0.01;
    double b = 1.1;
    int k = 2;
    double r = 1.0;

    static NormParams from(const ProblemParams& p);
    // sum_{n=0}^{beta} 1/(n+1)^b
    double r_b(int beta) const;
    // sum_{n>=0} 1/(n+1)^b
    double xi_b() const;
};

}  // namespace gevlab
