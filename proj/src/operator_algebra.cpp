#include "gevlab/operator_algebra.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "gevlab/geometry.hpp"

namespace gevlab {

cplx PartialFraction::eval(cplx tau) const {
    const int N = int(poles.size());
    double pmax = 0.0;
    for (cplx q : poles) pmax = std::max(pmax, std::abs(q));
    cplx s = 0.0;
    if (std::abs(tau) <= pmax) {
        for (int j = 0; j < N; ++j) s += residues[j] / (tau - poles[j]);
        return s;
    }
    // Outside the poles the plain sum cancels down to O(tau^-N). The moments sum_j r_j p_j^m
    // vanish for m <= N-2, which leaves 1/Q = tau^{1-N} sum_j r_j p_j^{N-1} / (tau - p_j).
    for (int j = 0; j < N; ++j) s += residues[j] * std::pow(poles[j] / tau, N - 1) / (tau - poles[j]);
    return s;
}

double PartialFraction::min_pole_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j) g = std::min(g, std::abs(poles[i] - poles[j]));
    return g;
}

namespace {

// Roots of c (k tau^k)^s + a with c = |c| e^{i arg_c}; residue of 1/Q is -root/(a k s).
PartialFraction factor_roots(int k, int s, cplx a, double c_mod, double c_arg) {
    if (a == cplx(0.0)) throw Error(ErrorCode::InvalidArgument, "constant term must be nonzero");
    const int n = k * s;
    PartialFraction pf;
    const double mod = std::pow(std::abs(a) / c_mod, 1.0 / n) / std::pow(double(k), 1.0 / k);
    for (int j = 0; j < n; ++j) {
        double ang = (kPi * (2 * j + 1) + std::arg(a) - c_arg) / n;
        cplx root = std::polar(mod, ang);
        pf.poles.push_back(root);
        pf.residues.push_back(-root / (a * double(k) * double(s)));
    }
    return pf;
}

}  // namespace

PartialFraction partial_fraction_fixed(const ProblemParams& p) {
    return factor_roots(p.k, p.s2, p.a2, 1.0, 0.0);
}

PartialFraction partial_fraction_movable(const ProblemParams& p, const EpsPoint& eps) {
    if (!(eps.modulus > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be nonzero");
    const double m = p.movable_eps_exponent();
    PartialFraction pf =
        factor_roots(p.k, p.s1, p.a1, std::pow(eps.modulus, m), m * eps.arg);
    pf.eps_scaling_exponent = double(p.movable_gap()) / double(p.k * p.s1 * p.s2);
    return pf;
}

cplx fixed_factor(const ProblemParams& p, cplx tau) {
    return std::pow(double(p.k) * std::pow(tau, p.k), p.s2) + p.a2;
}

cplx movable_factor(const ProblemParams& p, const EpsPoint& eps, cplx tau) {
    return eps.pow(p.movable_eps_exponent()) * std::pow(double(p.k) * std::pow(tau, p.k), p.s1) +
           p.a1;
}

bool EulerExpansion::identity_holds(long long n) const {
    long long lhs = 1;
    for (int j = 0; j < kappa0; ++j) lhs *= (n - j);
    long long rhs = 0;
    for (int p = 1; p <= kappa0; ++p) {
        long long prod = 1;
        for (int q = 0; q < p; ++q) prod *= (n + q * k);
        rhs += A(p) * prod;
    }
    return lhs == rhs;
}

EulerExpansion euler_expansion(int kappa0, int k) {
    if (kappa0 < 1 || k < 2) throw Error(ErrorCode::InvalidArgument, "need kappa0 >= 1, k >= 2");
    using Q = boost::rational<long long>;
    // Polynomials in n as coefficient vectors (index = degree).
    auto mul_linear = [](std::vector<Q> poly, long long shift) {
        std::vector<Q> out(poly.size() + 1, Q(0));
        for (std::size_t d = 0; d < poly.size(); ++d) {
            out[d + 1] += poly[d];
            out[d] += poly[d] * shift;
        }
        return out;
    };
    std::vector<Q> target{Q(1)};
    for (int j = 0; j < kappa0; ++j) target = mul_linear(target, -j);
    std::vector<std::vector<Q>> basis(kappa0 + 1);
    basis[0] = {Q(1)};
    for (int p = 1; p <= kappa0; ++p) basis[p] = mul_linear(basis[p - 1], (long long)(p - 1) * k);
    // The basis polynomial of degree p is monic: solve from the top degree down.
    std::vector<Q> A(kappa0 + 1, Q(0));
    std::vector<Q> rest = target;
    for (int p = kappa0; p >= 1; --p) {
        A[p] = rest[p];
        for (std::size_t d = 0; d < basis[p].size(); ++d) rest[d] -= A[p] * basis[p][d];
    }
    if (rest[0] != Q(0))
        throw Error(ErrorCode::InvalidArgument, "Euler expansion has a nonzero constant remainder");
    EulerExpansion e;
    e.kappa0 = kappa0;
    e.k = k;
    for (int p = 1; p <= kappa0; ++p) {
        if (A[p].denominator() != 1)
            throw Error(ErrorCode::InvalidArgument, "non-integral Euler coefficient");
        e.coefficients.push_back(A[p].numerator());
    }
    return e;
}

void populate_euler_table(ProblemParams& p) {
    p.A_table.clear();
    for (const auto& f : p.forcing) {
        if (f.kappa0 < 1) continue;
        EulerExpansion e = euler_expansion(f.kappa0, p.k);
        for (int q = 1; q <= f.kappa0; ++q) p.A_table[{f.kappa0, q}] = double(e.A(q));
    }
}

KernelSup convolution_kernel_sup(double nu, double xi, int alpha, int beta, const NormParams& np,
                                 double x_max) {
    if (beta <= alpha) throw Error(ErrorCode::InvalidArgument, "kernel sup needs alpha < beta");
    const double c = np.sigma * (np.r_b(beta) - np.r_b(alpha));
    const double k = np.k;
    if (!std::isfinite(x_max)) x_max = 60.0 * (nu + xi + 3.0) / c;
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto logB = [&](double x) {
        auto f = [&](double h) { return std::pow(h, 1.0 / k + xi) * std::pow(x - h, nu) / (1.0 + h * h); };
        double I = integrator.integrate(f, 0.0, x);
        if (!(I > 0.0)) return -std::numeric_limits<double>::infinity();
        return std::log1p(x * x) + (1.0 - 1.0 / k) * std::log(x) - c * x + std::log(I);
    };
    const int n = 240;
    const double lo = std::log(1e-4), hi = std::log(x_max);
    int best = 0;
    double bestv = -std::numeric_limits<double>::infinity();
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        vals[i] = logB(std::exp(lo + (hi - lo) * i / (n - 1)));
        if (vals[i] > bestv) {
            bestv = vals[i];
            best = i;
        }
    }
    KernelSup out;
    out.at_boundary = (best == n - 1);
    double a = lo + (hi - lo) * std::max(0, best - 1) / (n - 1);
    double b = lo + (hi - lo) * std::min(n - 1, best + 1) / (n - 1);
    auto res = boost::math::tools::brent_find_minima([&](double lx) { return -logB(std::exp(lx)); },
                                                     a, b, 40);
    double v = std::max(bestv, -res.second);
    out.value = std::exp(v);
    out.argmax = (-res.second >= bestv) ? std::exp(res.first)
                                        : std::exp(lo + (hi - lo) * best / (n - 1));
    return out;
}

BoundReport estimate_bounds(const GeometryConfig& g, const ProblemParams& p, const BoundSampling& s,
                            const std::vector<ConvolutionUse>& uses) {
    BoundReport rep;
    const double r = p.r();
    std::ostringstream desc;
    desc << "eps moduli " << s.eps_moduli.size() << " x args " << s.eps_args_per_sector
         << " per sector; tau: " << s.radial_points << " radii x " << s.angular_points
         << " angles in S_d plus D(0,rho0); radius_max " << s.radius_max << " |eps|^r";
    rep.grid = desc.str();
    for (double em : s.eps_moduli) {
        double c2_here = 0.0;
        for (std::size_t i = 0; i < g.covering.size(); ++i) {
            const Sector& sec = g.covering[i];
            const double d = i < g.sd_directions.size() ? g.sd_directions[i] : g.rays.at(i);
            for (int a = 0; a < s.eps_args_per_sector; ++a) {
                double ea = sec.theta1 + sec.opening() * (a + 0.5) / s.eps_args_per_sector;
                EpsPoint eps{em, ea};
                cplx ev = eps.value();
                // The ray d itself and the explicit extra points must lie in Omega(eps); the rest
                // of S_d and the disc may legitimately meet an excluded wedge.
                std::vector<std::pair<cplx, bool>> pts;
                double rmax = s.radius_max * std::pow(em, r);
                for (int q = 0; q < s.radial_points; ++q) {
                    double rho = rmax * std::pow(1e-4, 1.0 - double(q) / (s.radial_points - 1));
                    for (int m = 0; m < s.angular_points; ++m) {
                        double f = s.angular_points == 1
                                       ? 0.0
                                       : -0.9 + 1.8 * m / double(s.angular_points - 1);
                        const bool on_ray = 2 * m == s.angular_points - 1;
                        pts.push_back({std::polar(rho, d + (on_ray ? 0.0 : f) * g.delta1), on_ray});
                    }
                    if (rho < g.rho0)
                        for (int m = 0; m < 8; ++m)
                            pts.push_back({std::polar(rho, 2.0 * kPi * m / 8.0), false});
                }
                if (i == 0)
                    for (cplx e : s.extra_points) pts.push_back({e, true});
                for (const auto& [tau, must] : pts) {
                    if (!omega_membership(g, p, ev, tau, int(i))) {
                        if (!must) continue;
                        rep.ok = false;
                        rep.C1 = rep.C2 = std::numeric_limits<double>::infinity();
                        return rep;
                    }
                    rep.C1 = std::max(rep.C1, 1.0 / std::abs(fixed_factor(p, tau)));
                    c2_here = std::max(c2_here, 1.0 / std::abs(movable_factor(p, eps, tau)));
                }
            }
        }
        rep.C2_per_eps.push_back(c2_here);
        rep.C2 = std::max(rep.C2, c2_here);
    }
    NormParams np = NormParams::from(p);
    for (const auto& u : uses) {
        KernelSup ks = convolution_kernel_sup(u.nu, u.xi, u.alpha, u.beta, np,
                                              std::numeric_limits<double>::infinity());
        rep.C3 = std::max(rep.C3, ks.value);
    }
    rep.ok = rep.ok && std::isfinite(rep.C1) && std::isfinite(rep.C2) && rep.C1 > 0 && rep.C2 > 0;
    return rep;
}

}  // namespace gevlab
