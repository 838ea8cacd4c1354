#include <doctest.h>

#include <cmath>
#include <random>

#include "gevlab/geometry.hpp"
#include "gevlab/operator_algebra.hpp"
#include "support.hpp"

using namespace gevlab;

namespace {

// Test-side oracle: the identity n(n-1)...(n-kappa0+1) = sum_p A_p prod_{q<p}(n+qk) is
// polynomial in n, so it also holds at n = -k p where every product with more than p factors
// vanishes. That makes the system triangular; solve it in integers.
std::vector<long long> monomial_matching(int kappa0, int k) {
    std::vector<long long> A(kappa0 + 1, 0);
    auto falling = [](long long n, int m) {
        long long v = 1;
        for (int q = 0; q < m; ++q) v *= (n - q);
        return v;
    };
    auto rising = [k](long long n, int p) {
        long long v = 1;
        for (int q = 0; q < p; ++q) v *= (n + q * k);
        return v;
    };
    for (int p = 1; p <= kappa0; ++p) {
        const long long n = -static_cast<long long>(k) * p;
        long long rhs = falling(n, kappa0);
        for (int q = 1; q < p; ++q) rhs -= A[q] * rising(n, q);
        const long long d = rising(n, p);
        REQUIRE(rhs % d == 0);
        A[p] = rhs / d;
    }
    return A;
}

}  // namespace

TEST_CASE("euler expansion matches the monomial oracle") {
    for (int k : {2, 3, 4})
        for (int kappa0 = 1; kappa0 <= 6; ++kappa0) {
            EulerExpansion e = euler_expansion(kappa0, k);
            CAPTURE(k);
            CAPTURE(kappa0);
            CHECK(e.A(kappa0) == 1);
            for (long long n = 1; n <= 2 * kappa0 + 2; ++n) CHECK(e.identity_holds(n));
        }
}

TEST_CASE("euler expansion low-order coefficients") {
    for (int k : {2, 3, 4}) {
        CHECK(euler_expansion(1, k).A(1) == 1);
        CHECK(euler_expansion(2, k).A(1) == -(k + 1));
        EulerExpansion e3 = euler_expansion(3, k);
        CHECK(e3.A(1) == (k + 1) * (k + 2));
        CHECK(e3.A(2) == -3 * (k + 1));
        // The forward-substitution oracle agrees for every kappa0 <= 6.
        for (int kappa0 = 1; kappa0 <= 6; ++kappa0) {
            auto A = monomial_matching(kappa0, k);
            EulerExpansion e = euler_expansion(kappa0, k);
            for (int p = 1; p <= kappa0; ++p) CHECK(e.A(p) == A[p]);
        }
    }
}

TEST_CASE("fixed partial fractions") {
    ProblemParams p = testing::small_params();
    PartialFraction pf = partial_fraction_fixed(p);
    REQUIRE(pf.poles.size() == 2);
    bool plus = false, minus = false;
    for (cplx q : pf.poles) {
        plus = plus || std::abs(q - cplx(0, 1.0 / std::sqrt(2.0))) < 1e-14;
        minus = minus || std::abs(q - cplx(0, -1.0 / std::sqrt(2.0))) < 1e-14;
    }
    CHECK(plus);
    CHECK(minus);
    CHECK(std::abs(pf.eval(1.0) - 1.0 / 3.0) < 1e-14);

    p.s2 = 2;
    pf = partial_fraction_fixed(p);
    CHECK(pf.poles.size() == 4);
    for (cplx q : pf.poles) CHECK(std::abs(q) == doctest::Approx(1.0 / std::sqrt(2.0)));
    p.a2 = 0.0;
    CHECK_THROWS_AS(partial_fraction_fixed(p), Error);
}

TEST_CASE("partial-fraction identities at random off-pole points") {
    const ProblemParams& p = testing::reference_config().problem;
    std::mt19937_64 rng(testing::reference_config().seed);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    PartialFraction fixed = partial_fraction_fixed(p);
    EpsPoint eps{0.1, 0.3};
    PartialFraction mov = partial_fraction_movable(p, eps);
    const double gap_f = fixed.min_pole_gap(), gap_m = mov.min_pole_gap();
    int tested = 0;
    double worst = 0.0;
    while (tested < 1000) {
        cplx tau(U(rng), U(rng));
        bool far = true;
        for (cplx q : fixed.poles) far = far && std::abs(tau - q) > 0.1 * gap_f;
        for (cplx q : mov.poles) far = far && std::abs(tau - q) > 0.1 * gap_m;
        if (!far) continue;
        ++tested;
        cplx a = 1.0 / fixed_factor(p, tau), b = fixed.eval(tau);
        worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
        a = 1.0 / movable_factor(p, eps, tau);
        b = mov.eval(tau);
        worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
    }
    CHECK(worst < 1e-10);

    // Far from the poles the value is O(tau^{-10}) and must not drown in cancellation.
    for (double R : {5.0, 50.0, 500.0}) {
        cplx tau = std::polar(R, 0.3);
        cplx a = 1.0 / fixed_factor(p, tau);
        CHECK(std::abs(fixed.eval(tau) - a) <= 1e-12 * std::abs(a));
    }
}

TEST_CASE("movable poles scale with |eps| and sit on second-kind directions") {
    ProblemParams p = testing::small_params();
    p.r1 = 1;
    // Exponent (s1 r2 - s2 r1)/(k s1 s2) = 1: halving |eps| halves the moduli.
    PartialFraction a = partial_fraction_movable(p, {0.2, 0.0});
    PartialFraction b = partial_fraction_movable(p, {0.1, 0.0});
    CHECK(a.eps_scaling_exponent == doctest::Approx(1.0));
    for (std::size_t j = 0; j < a.poles.size(); ++j)
        CHECK(std::abs(b.poles[j]) / std::abs(a.poles[j]) == doctest::Approx(0.5).epsilon(1e-12));
    // Identity at tau = 1, eps = 0.5.
    EpsPoint e{0.5, 0.0};
    PartialFraction c = partial_fraction_movable(p, e);
    CHECK(std::abs(c.eval(1.0) - 1.0 / movable_factor(p, e, 1.0)) < 1e-12);

    const ProblemParams& q = testing::reference_config().problem;
    const Sector& s = testing::reference_config().geometry.covering[5];
    EpsPoint eb = s.point(0.05, s.bisector());
    PartialFraction m = partial_fraction_movable(q, eb);
    auto d = second_kind_directions(q, s);
    for (cplx pole : m.poles) {
        double best = 10.0;
        for (double dj : d) best = std::min(best, std::abs(std::remainder(std::arg(pole) - dj, 2 * kPi)));
        CHECK(best < 1e-10);
    }
    // Over a decade of |eps| the moduli follow |eps|^{exponent}.
    const double ex = double(q.movable_gap()) / (q.k * q.s1 * q.s2);
    double m1 = std::abs(partial_fraction_movable(q, {0.1, 0.2}).poles[0]);
    double m2 = std::abs(partial_fraction_movable(q, {0.01, 0.2}).poles[0]);
    CHECK(std::abs(m2 / m1 - std::pow(0.1, ex)) < 1e-10 * std::pow(0.1, ex));
    CHECK_THROWS_AS(partial_fraction_movable(q, {0.0, 0.0}), Error);
}

TEST_CASE("bound estimates") {
    const RunConfig& cfg = testing::reference_config();
    BoundSampling s;
    s.eps_moduli = {0.1, 0.05, 0.025};
    BoundReport r = estimate_bounds(cfg.geometry, cfg.problem, s);
    CHECK(r.ok);
    CHECK(std::isfinite(r.C1));
    CHECK(r.C1 > 0.0);
    REQUIRE(r.C2_per_eps.size() == 3);
    double lo = *std::min_element(r.C2_per_eps.begin(), r.C2_per_eps.end());
    double hi = *std::max_element(r.C2_per_eps.begin(), r.C2_per_eps.end());
    CHECK(hi / lo < 1.10);

    // Kernel sup is attained at moderate x because the exponential factor wins.
    NormParams np = NormParams::from(cfg.problem);
    KernelSup ks = convolution_kernel_sup(0.0, 0.0, 0, 4, np, 1e4);
    CHECK(std::isfinite(ks.value));
    CHECK_FALSE(ks.at_boundary);
}
