#include "gevlab/params.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "gevlab/angles.hpp"

namespace gevlab {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
        case ErrorCode::Domain: return "DOMAIN";
        case ErrorCode::NonConvergent: return "NONCONVERGENT";
        case ErrorCode::Truncation: return "TRUNCATION";
        case ErrorCode::InsufficientDecay: return "INSUFFICIENT_DECAY";
        case ErrorCode::NoiseFloor: return "NOISE_FLOOR";
        case ErrorCode::Assumption: return "ASSUMPTION";
        case ErrorCode::Parse: return "PARSE";
    }
    return "UNKNOWN";
}

int ProblemParams::max_beta_in_b() const {
    int m = 0;
    for (const auto& [key, c] : b_coeffs) m = std::max(m, key[2]);
    return m;
}

void ProblemParams::validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, m); };
    if (k < 2) fail("k must be >= 2");
    if (s1 < 1 || s2 < 1) fail("s1 and s2 must be positive");
    if (r1 < 0) fail("r1 must be nonnegative");
    if (r2 < 1) fail("r2 must be positive");
    if (S < 1) fail("S must be positive");
    if (a1 == cplx(0.0) || a2 == cplx(0.0)) fail("a1 and a2 must be nonzero");
    if (!(b_param > 1.0)) fail("b_param must exceed 1");
    if (!(sigma > 0.0)) fail("sigma must be positive");
    for (const auto& f : forcing)
        if (f.s < 0 || f.kappa0 < 0 || f.kappa1 < 0) fail("forcing triples must be nonnegative");
}

cplx EpsPoint::value() const { return std::polar(modulus, arg); }

cplx EpsPoint::pow(double q) const { return std::polar(std::pow(modulus, q), q * arg); }

bool Sector::contains(cplx eps) const {
    double m = std::abs(eps);
    if (!(m > 0.0) || !(m < radius)) return false;
    double a = lift(std::arg(eps));
    return a > theta1 && a < theta2;
}

double Sector::lift(double arg) const { return theta1 + ccw_span(theta1, arg); }

EpsPoint Sector::point(double modulus, double arg) const { return {modulus, lift(arg)}; }

InitialDatum InitialDatum::monomial(int n, cplx c, bool scaled) {
    InitialDatum d;
    d.family = Family::Monomial;
    d.coeffs.assign(n + 1, 0.0);
    d.coeffs[n] = c;
    d.scaled = scaled;
    return d;
}

bool InitialDatum::is_zero() const {
    if (family == Family::Zero) return true;
    for (auto c : coeffs)
        if (c != cplx(0.0)) return false;
    return true;
}

cplx InitialDatum::eval(cplx tau, const EpsPoint& eps, double r, int k) const {
    if (is_zero()) return 0.0;
    cplx u = scaled ? tau / eps.pow(r) : tau;
    cplx p = 0.0;
    for (std::size_t n = coeffs.size(); n-- > 0;) p = p * u + coeffs[n];
    if (gauss_rate != 0.0) p *= std::exp(-gauss_rate * std::pow(u, k));
    if (eps_power != 0.0) p *= eps.pow(eps_power);
    return p;
}

NormParams NormParams::from(const ProblemParams& p) {
    return {p.sigma, p.b_param, p.k, p.r()};
}

double NormParams::r_b(int beta) const {
    double s = 0.0;
    for (int n = 0; n <= beta; ++n) s += std::pow(n + 1.0, -b);
    return s;
}

double NormParams::xi_b() const { return boost::math::zeta(b); }

}  // namespace gevlab
