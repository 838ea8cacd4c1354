#include "gevlab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "gevlab/common.hpp"

namespace gevlab {
namespace {

// P_n^{(a,b)}(x) and its derivative by the three-term recurrence.
void jacobi_eval(int n, double a, double b, double x, double& p, double& dp) {
    auto value = [&](int m, double al, double be) {
        if (m == 0) return 1.0;
        double p0 = 1.0;
        double p1 = (al + 1.0) + (al + be + 2.0) * (x - 1.0) / 2.0;
        for (int j = 2; j <= m; ++j) {
            double c = 2.0 * j + al + be;
            double a1 = 2.0 * j * (j + al + be) * (c - 2.0);
            double a2 = (c - 1.0) * (c * (c - 2.0) * x + al * al - be * be);
            double a3 = 2.0 * (j + al - 1.0) * (j + be - 1.0) * c;
            double p2 = (a2 * p1 - a3 * p0) / a1;
            p0 = p1;
            p1 = p2;
        }
        return p1;
    };
    p = value(n, a, b);
    dp = n == 0 ? 0.0 : 0.5 * (n + a + b + 1.0) * value(n - 1, a + 1.0, b + 1.0);
}

GaussRule build_rule(int n, double alpha, double beta) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "Gauss rule needs n >= 1");
    if (alpha <= -1.0 || beta <= -1.0)
        throw Error(ErrorCode::InvalidArgument, "Jacobi exponents must exceed -1");
    // Golub-Welsch for starting values.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    double ab = alpha + beta;
    for (int i = 0; i < n; ++i) {
        double c = 2.0 * i + ab;
        J(i, i) = (i == 0) ? (beta - alpha) / (ab + 2.0)
                           : (beta * beta - alpha * alpha) / (c * (c + 2.0));
        if (i + 1 < n) {
            double m = i + 1.0;
            double cm = 2.0 * m + ab;
            double num = 4.0 * m * (m + alpha) * (m + beta) * (m + ab);
            double den = cm * cm * (cm + 1.0) * (cm - 1.0);
            J(i, i + 1) = J(i + 1, i) = std::sqrt(num / den);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule rule;
    rule.alpha = alpha;
    rule.beta = beta;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double lognorm = (ab + 1.0) * std::log(2.0) + std::lgamma(n + alpha + 1.0) +
                     std::lgamma(n + beta + 1.0) - std::lgamma(n + ab + 1.0) -
                     std::lgamma(n + 1.0);
    for (int i = 0; i < n; ++i) {
        double x = es.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            double p, dp;
            jacobi_eval(n, alpha, beta, x, p, dp);
            if (dp == 0.0) break;
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p, dp;
        jacobi_eval(n, alpha, beta, x, p, dp);
        rule.nodes[i] = x;
        rule.weights[i] = std::exp(lognorm) / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_jacobi(int n, double alpha, double beta) {
    static std::mutex mtx;
    static std::map<std::tuple<int, double, double>, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(n, alpha, beta);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto rule = std::make_unique<GaussRule>(build_rule(n, alpha, beta));
    const GaussRule& ref = *rule;
    cache.emplace(key, std::move(rule));
    return ref;
}

const GaussRule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

void mapped_rule(const GaussRule& rule, double a, double b, std::vector<double>& y,
                 std::vector<double>& w) {
    const std::size_t n = rule.nodes.size();
    y.resize(n);
    w.resize(n);
    double half = 0.5 * (b - a);
    double scale = std::pow(half, rule.alpha + rule.beta + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = a + half * (1.0 + rule.nodes[i]);
        w[i] = rule.weights[i] * scale;
    }
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> bw(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double prod = 1.0;
        for (std::size_t m = 0; m < n; ++m)
            if (m != j) prod *= (nodes[j] - nodes[m]);
        bw[j] = 1.0 / prod;
    }
    // Normalise to keep magnitudes moderate; the formula is scale invariant.
    double mx = 0.0;
    for (double v : bw) mx = std::max(mx, std::abs(v));
    for (double& v : bw) v /= mx;
    return bw;
}

void lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bw, double x,
                    double* out) {
    const std::size_t n = nodes.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (x == nodes[j]) {
            for (std::size_t m = 0; m < n; ++m) out[m] = (m == j) ? 1.0 : 0.0;
            return;
        }
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = bw[j] / (x - nodes[j]);
        denom += out[j];
    }
    for (std::size_t j = 0; j < n; ++j) out[j] /= denom;
}

}  // namespace gevlab
