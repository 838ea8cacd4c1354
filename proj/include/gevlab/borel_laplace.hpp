#pragma once

#include <functional>
#include <vector>

#include "gevlab/series.hpp"

namespace gevlab {

// Coefficient n becomes a_n / Gamma(n/k). The constant term must vanish.
TruncatedSeries mk_borel(const TruncatedSeries& series, int k);

// Ray L_gamma for the m_k-Laplace transform. Panels are laid in w = |u|/|T| with
// width `step`; the ray is cut where the integrand tail falls below `tail_tol`
// relative to the accumulated value, but never beyond `max_w`.
struct RayQuadrature {
    double gamma = 0.0;
    int node_count = 16;  // Gauss-Legendre nodes per panel
    double step = 0.25;
    double delta_lower_bound = 0.5;
    double tail_tol = 1e-17;
    double max_w = 60.0;
};

struct LaplaceResult {
    cplx value;
    double error_estimate = 0.0;  // |Q_n - Q_{n/2}| on the same panels, plus the tail
    double cutoff_radius = 0.0;   // in |u|
};

LaplaceResult mk_laplace_ray_detailed(const std::function<cplx(cplx)>& f, int k,
                                      const RayQuadrature& quad, cplx T);

inline cplx mk_laplace_ray(const std::function<cplx(cplx)>& f, int k, const RayQuadrature& quad,
                           cplx T) {
    return mk_laplace_ray_detailed(f, k, quad, T).value;
}

// Summed value of a truncated series via B then L along the ray.
cplx laplace_of_borel(const TruncatedSeries& series, int k, const RayQuadrature& quad, cplx T);

struct IdentityReport {
    double euler_rule = 0.0;       // max |B(t^{k+1} f') - k tau^k B(f)| over coefficients
    double monomial_rule = 0.0;    // max relative discrepancy of B(t^m f) against the convolution
    int order = 0;
};

// The convolution side of the monomial rule is computed by Gauss-Jacobi quadrature.
IdentityReport check_borel_identities(const TruncatedSeries& series, int k, int m);

struct GevreyRemainderReport {
    double C = 0.0;             // envelope constant: max_n Q_n / M^n
    double M = 0.0;             // exp of the regression slope of log Q_n
    double C_fit = 0.0;         // regression intercept
    double violation_ratio = 0.0;  // max_n Q_n / (C_fit M^n)
    std::vector<int> orders;    // n used in the fit
    std::vector<double> Q;      // Q_n = max_T R_n(T) / (Gamma(1+n/k) |T|^n)
};

// R_n(T) = |sum(T) - sum_{p<n} a_p T^p|. Samples with R_n below `noise_rel` * |sum| are skipped.
GevreyRemainderReport gevrey_remainder_check(const std::vector<std::pair<cplx, cplx>>& sum_values,
                                             const TruncatedSeries& series, int k,
                                             double noise_rel = 1e-12);

}  // namespace gevlab
