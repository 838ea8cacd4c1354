#include "gevlab/borel_laplace.hpp"

#include <algorithm>
#include <cmath>

#include "gevlab/quadrature.hpp"

namespace gevlab {

TruncatedSeries mk_borel(const TruncatedSeries& series, int k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "mk_borel needs k >= 1");
    if (series.order() > 0 && series[0] != cplx(0.0))
        throw Error(ErrorCode::InvalidArgument, "mk_borel: series has a nonzero constant term");
    std::vector<cplx> out(series.order(), 0.0);
    for (int n = 1; n < series.order(); ++n) out[n] = series[n] / std::tgamma(double(n) / k);
    return TruncatedSeries(out, SeriesVar::Tau);
}

LaplaceResult mk_laplace_ray_detailed(const std::function<cplx(cplx)>& f, int k,
                                      const RayQuadrature& quad, cplx T) {
    const double Tabs = std::abs(T);
    if (!(Tabs > 0.0)) throw Error(ErrorCode::Domain, "Laplace transform at T = 0");
    const double c = std::cos(k * (quad.gamma - std::arg(T)));
    if (c < quad.delta_lower_bound - 1e-12)
        throw Error(ErrorCode::Domain, "cos(k(gamma - arg T)) = " + std::to_string(c) +
                                           " below Delta = " + std::to_string(quad.delta_lower_bound));
    const cplx dir = std::polar(1.0, quad.gamma);
    const GaussRule& full = gauss_legendre(quad.node_count);
    const GaussRule& half = gauss_legendre(std::max(2, quad.node_count / 2));
    // Integrand in w: k f(w |T| e^{i gamma}) exp(-(w |T| e^{i gamma} / T)^k) / w.
    auto g = [&](double w) {
        cplx u = w * Tabs * dir;
        return double(k) * f(u) * std::exp(-std::pow(u / T, k)) / w;
    };
    auto panel = [&](const GaussRule& rule, double a, double b) {
        std::vector<double> y, wq;
        mapped_rule(rule, a, b, y, wq);
        cplx s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += wq[i] * g(y[i]);
        return s;
    };
    const double nominal = std::pow(41.5 / c, 1.0 / k);
    LaplaceResult res;
    cplx sum = 0.0;
    double err = 0.0;
    double a = 0.0;
    for (;;) {
        double b = a + quad.step;
        cplx p = panel(full, a, b);
        err += std::abs(p - panel(half, a, b));
        sum += p;
        a = b;
        if (a >= nominal && std::abs(p) <= quad.tail_tol * std::max(std::abs(sum), 1e-300)) {
            err += std::abs(p);
            break;
        }
        if (a >= quad.max_w)
            throw Error(ErrorCode::NonConvergent,
                        "Laplace integrand has not decayed at |u| = " + std::to_string(a * Tabs));
    }
    res.value = sum;
    res.error_estimate = err;
    res.cutoff_radius = a * Tabs;
    return res;
}

cplx laplace_of_borel(const TruncatedSeries& series, int k, const RayQuadrature& quad, cplx T) {
    TruncatedSeries b = mk_borel(series, k);
    return mk_laplace_ray([&](cplx u) { return b.eval(u); }, k, quad, T);
}

IdentityReport check_borel_identities(const TruncatedSeries& series, int k, int m) {
    IdentityReport rep;
    const int N = series.order();
    rep.order = N;
    TruncatedSeries Bf = mk_borel(series, k);
    // (i) t^{k+1} d_t f has coefficient n a_n at t^{n+k}.
    for (int n = 1; n + k < N; ++n) {
        cplx lhs = double(n) * series[n] / std::tgamma(double(n + k) / k);
        cplx rhs = double(k) * Bf[n];
        rep.euler_rule = std::max(rep.euler_rule, std::abs(lhs - rhs));
    }
    // (ii) B(t^m f) against (tau^k/Gamma(m/k)) int_0^{tau^k} (tau^k - s)^{m/k-1} B(f)(s^{1/k}) ds/s.
    // On the monomial s^{n/k} the integral is tau^{m+n} int_0^1 (1-v)^{m/k-1} v^{n/k-1} dv.
    for (int n = 1; n + m < N; ++n) {
        if (series[n] == cplx(0.0)) continue;
        cplx lhs = series[n] / std::tgamma(double(n + m) / k);
        const GaussRule& gj = gauss_jacobi(8, double(m) / k - 1.0, double(n) / k - 1.0);
        double beta = 0.0;
        for (double w : gj.weights) beta += w;
        beta /= std::pow(2.0, double(m + n) / k - 1.0);
        cplx rhs = Bf[n] * beta / std::tgamma(double(m) / k);
        rep.monomial_rule = std::max(rep.monomial_rule, std::abs(lhs - rhs) / std::abs(lhs));
    }
    return rep;
}

GevreyRemainderReport gevrey_remainder_check(const std::vector<std::pair<cplx, cplx>>& sum_values,
                                             const TruncatedSeries& series, int k, double noise_rel) {
    GevreyRemainderReport rep;
    for (int n = 1; n <= series.order(); ++n) {
        double Q = 0.0;
        bool any = false;
        for (const auto& [T, sum] : sum_values) {
            cplx partial = 0.0;
            for (int p = 0; p < n; ++p) partial += series[p] * std::pow(T, p);
            double R = std::abs(sum - partial);
            if (R < noise_rel * std::max(std::abs(sum), 1e-300)) continue;
            any = true;
            Q = std::max(Q, R / (std::tgamma(1.0 + double(n) / k) * std::pow(std::abs(T), n)));
        }
        if (any) {
            rep.orders.push_back(n);
            rep.Q.push_back(Q);
        }
    }
    const int m = int(rep.orders.size());
    if (m < 2) return rep;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        double x = rep.orders[i], y = std::log(rep.Q[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double icpt = (sy - slope * sx) / m;
    rep.M = std::exp(slope);
    rep.C_fit = std::exp(icpt);
    for (int i = 0; i < m; ++i) {
        double env = std::pow(rep.M, rep.orders[i]);
        rep.C = std::max(rep.C, rep.Q[i] / env);
        rep.violation_ratio = std::max(rep.violation_ratio, rep.Q[i] / (rep.C_fit * env));
    }
    return rep;
}

}  // namespace gevlab
