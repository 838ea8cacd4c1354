#include <doctest.h>

#include <cmath>
#include <random>

#include "gevlab/borel_laplace.hpp"

using namespace gevlab;

namespace {

// Independent Beta value for the monomial rule.
double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

}  // namespace

TEST_CASE("borel transform divides by Gamma(n/k)") {
    TruncatedSeries s({0.0, 2.0, 3.0, cplx(0.0, 1.0)});
    TruncatedSeries b = mk_borel(s, 2);
    CHECK(std::abs(b[1] - 2.0 / std::sqrt(kPi)) < 1e-15);
    CHECK(std::abs(b[2] - 3.0) < 1e-15);
    CHECK(std::abs(b[3] - cplx(0.0, 1.0) / (0.5 * std::sqrt(kPi))) < 1e-15);

    TruncatedSeries bad({1.0, 1.0});
    CHECK_THROWS_AS(mk_borel(bad, 2), Error);
}

TEST_CASE("laplace undoes borel on monomials") {
    for (int k : {2, 3}) {
        RayQuadrature q;
        q.gamma = 0.4;
        for (int n = 1; n <= 30; ++n) {
            auto s = TruncatedSeries::monomial(n, n + 1);
            for (int j = 0; j < 20; ++j) {
                double mod = 0.2 + 0.09 * j;
                double arg = q.gamma + (j % 5 - 2) * 0.08;  // |k(gamma - arg T)| <= 0.48
                cplx T = std::polar(mod, arg);
                cplx got = laplace_of_borel(s, k, q, T);
                cplx want = std::pow(T, n);
                CHECK(std::abs(got - want) <= 1e-8 * std::abs(want));
            }
        }
    }
}

TEST_CASE("laplace of a growing exponential has the closed form") {
    const int k = 2;
    RayQuadrature q;
    q.gamma = 0.3;
    for (double mod : {0.3, 1.0, 2.5}) {
        cplx T = std::polar(mod, q.gamma);
        double Tk = std::pow(mod, k);
        auto f = [&](cplx u) { return u * std::exp(std::pow(u, k) / (2.0 * Tk)); };
        LaplaceResult r = mk_laplace_ray_detailed(f, k, q, T);
        // k int_0^inf rho e^{i gamma} exp(-c rho^k) d rho / rho with c = (1 - e^{i k gamma}/2)/|T|^k.
        cplx c = (1.0 - 0.5 * std::polar(1.0, k * q.gamma)) / Tk;
        cplx want = std::polar(1.0, q.gamma) * std::tgamma(1.0 / k) * std::pow(c, -1.0 / k);
        CHECK(std::abs(r.value - want) <= 1e-12 * std::abs(want));
        CHECK(r.error_estimate < 1e-6 * std::abs(want));
        CHECK(r.cutoff_radius > 0.0);
    }
}

TEST_CASE("laplace rejects rays outside the Delta cone") {
    RayQuadrature q;
    q.gamma = 0.0;
    q.delta_lower_bound = 0.5;
    auto f = [](cplx u) { return u; };
    CHECK_THROWS_AS(mk_laplace_ray(f, 2, q, std::polar(1.0, 0.6)), Error);
    try {
        mk_laplace_ray(f, 2, q, 0.0);
        FAIL("expected a DOMAIN error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Domain);
    }
    CHECK_NOTHROW(mk_laplace_ray(f, 2, q, std::polar(1.0, 0.5)));
}

TEST_CASE("laplace is linear") {
    RayQuadrature q;
    q.gamma = -0.2;
    auto f = [](cplx u) { return u * u / (1.0 + u); };
    auto g = [](cplx u) { return std::sin(u) * u; };
    const cplx a(0.7, -1.3), b(-2.0, 0.5);
    for (double mod : {0.25, 0.8, 1.6}) {
        cplx T = std::polar(mod, -0.1);
        cplx lhs = mk_laplace_ray([&](cplx u) { return a * f(u) + b * g(u); }, 2, q, T);
        cplx rhs = a * mk_laplace_ray(f, 2, q, T) + b * mk_laplace_ray(g, 2, q, T);
        CHECK(std::abs(lhs - rhs) <= 1e-13 * (std::abs(lhs) + 1.0));
    }
}

TEST_CASE("borel identities on monomials match the Beta oracle") {
    for (int k : {2, 3}) {
        for (int m = 1; m <= 20; ++m) {
            for (int n = 1; n <= 20; ++n) {
                auto s = TruncatedSeries::monomial(n, n + m + 1);
                IdentityReport rep = check_borel_identities(s, k, m);
                CHECK(rep.monomial_rule <= 1e-12);
                // Oracle: 1/Gamma((m+n)/k) = B(m/k, n/k) / (Gamma(m/k) Gamma(n/k)).
                double lhs = 1.0 / std::tgamma(double(m + n) / k);
                double rhs = beta_fn(double(m) / k, double(n) / k) /
                             (std::tgamma(double(m) / k) * std::tgamma(double(n) / k));
                CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);
            }
        }
    }
}

TEST_CASE("borel identities on random series") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N;
    std::vector<cplx> c(11, 0.0);
    for (int n = 1; n < 11; ++n) c[n] = {N(rng), N(rng)};
    IdentityReport rep = check_borel_identities(TruncatedSeries(c), 2, 3);
    CHECK(rep.monomial_rule <= 1e-12);
    CHECK(rep.euler_rule <= 1e-12);
    CHECK(rep.order == 11);
}

TEST_CASE("gevrey remainder envelope") {
    const int k = 2;
    RayQuadrature q;
    q.gamma = kPi / 2;  // away from the pole of the Borel sum at tau = 1
    // a_p = Gamma(1 + p/k); the Borel sum is tau / (k (1 - tau)^2).
    std::vector<cplx> a(16, 0.0);
    for (int p = 1; p < 16; ++p) a[p] = std::tgamma(1.0 + double(p) / k);
    TruncatedSeries s(a);
    auto fB = [&](cplx u) { return u / (double(k) * (1.0 - u) * (1.0 - u)); };
    std::vector<std::pair<cplx, cplx>> vals;
    for (int j = 0; j < 8; ++j) {
        cplx T = std::polar(0.05 + 0.05 * j, q.gamma);
        vals.push_back({T, mk_laplace_ray(fB, k, q, T)});
    }
    GevreyRemainderReport rep = gevrey_remainder_check(vals, s, k);
    REQUIRE(rep.orders.size() >= 10);
    CHECK(rep.M > 0.5);
    CHECK(rep.M < 2.0);
    for (std::size_t i = 0; i < rep.orders.size(); ++i)
        CHECK(rep.Q[i] <= rep.C * std::pow(rep.M, rep.orders[i]) * (1.0 + 1e-12));

    // A convergent series: Q_n falls like 1/Gamma(1+n/k).
    std::vector<cplx> g(16, 1.0);
    g[0] = 0.0;
    std::vector<std::pair<cplx, cplx>> gv;
    for (int j = 0; j < 6; ++j) {
        cplx T = 0.1 + 0.1 * j;
        gv.push_back({T, T / (1.0 - T)});
    }
    GevreyRemainderReport conv = gevrey_remainder_check(gv, TruncatedSeries(g), k);
    CHECK(conv.M < 0.5);
}
