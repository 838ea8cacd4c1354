// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "gevlab/asymptotics.hpp"
#include "gevlab/borel_laplace.hpp"
#include "gevlab/coefficient_engine.hpp"
#include "gevlab/config.hpp"
#include "gevlab/jets.hpp"
#include "gevlab/operator_algebra.hpp"
#include "gevlab/solver.hpp"

#ifndef GEVLAB_CONFIG_DIR
#define GEVLAB_CONFIG_DIR "configs"
#endif

using namespace gevlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

const RunConfig& config() {
    static const RunConfig cfg = load_config(std::string(GEVLAB_CONFIG_DIR) + "/reference.json");
    return cfg;
}

EpsPoint bisector(int sector, double mod) {
    const Sector& s = config().geometry.covering[sector];
    return s.point(mod, s.bisector());
}

// Triangular solve of the Euler identity at n = -k p, independent of the library recursion.
std::vector<long long> monomial_matching(int kappa0, int k) {
    std::vector<long long> A(kappa0 + 1, 0);
    for (int p = 1; p <= kappa0; ++p) {
        const long long n = -static_cast<long long>(k) * p;
        long long rhs = 1, d = 1;
        for (int q = 0; q < kappa0; ++q) rhs *= n - q;
        for (int q = 1; q < p; ++q) {
            long long r = 1;
            for (int j = 0; j < q; ++j) r *= n + j * k;
            rhs -= A[q] * r;
        }
        for (int j = 0; j < p; ++j) d *= n + j * k;
        if (rhs % d != 0) return {};
        A[p] = rhs / d;
    }
    return A;
}

Outcome operator_expansion() {
    bool ok = true;
    int identities = 0;
    for (int k : {2, 3, 4}) {
        for (int kappa0 = 1; kappa0 <= 6; ++kappa0) {
            EulerExpansion e = euler_expansion(kappa0, k);
            auto A = monomial_matching(kappa0, k);
            if (A.empty()) return {false, "oracle lost integrality"};
            for (int p = 1; p <= kappa0; ++p) ok = ok && e.A(p) == A[p];
            for (long long n = 1; n <= 2 * kappa0 + 2; ++n, ++identities) ok = ok && e.identity_holds(n);
        }
        ok = ok && euler_expansion(2, k).A(1) == -(k + 1);
        ok = ok && euler_expansion(3, k).A(1) == (k + 1) * (k + 2);
        ok = ok && euler_expansion(3, k).A(2) == -3 * (k + 1);
    }
    return {ok, std::to_string(identities) + " integer identities, low-order A values reproduced"};
}

Outcome round_trip() {
    double worst = 0.0;
    for (int k : {2, 3}) {
        RayQuadrature q;
        q.gamma = 0.4;
        for (int n = 1; n <= 30; ++n) {
            auto s = TruncatedSeries::monomial(n, n + 1);
            for (int j = 0; j < 20; ++j) {
                cplx T = std::polar(0.2 + 0.09 * j, q.gamma + (j % 5 - 2) * 0.08);
                cplx got = laplace_of_borel(s, k, q, T);
                worst = std::max(worst, std::abs(got - std::pow(T, n)) / std::pow(std::abs(T), n));
            }
        }
    }
    return {worst <= 1e-8, "max relative error " + fmt("%.2e", worst) + " (tol 1e-8)"};
}

Outcome convolution_identity() {
    double worst = 0.0, oracle = 0.0;
    for (int k : {2, 3})
        for (int m = 1; m <= 20; ++m)
            for (int n = 1; n <= 20; ++n) {
                IdentityReport r = check_borel_identities(TruncatedSeries::monomial(n, n + m + 1), k, m);
                worst = std::max(worst, r.monomial_rule);
                double a = double(m) / k, b = double(n) / k;
                double beta = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
                double lhs = 1.0 / std::tgamma(a + b);
                double rhs = beta / (std::tgamma(a) * std::tgamma(b));
                oracle = std::max(oracle, std::abs(lhs - rhs) / lhs);
            }
    return {worst <= 1e-12 && oracle <= 1e-12,
            "max relative discrepancy " + fmt("%.2e", worst) + ", Beta oracle " + fmt("%.2e", oracle)};
}

Outcome partial_fractions() {
    const auto& p = config().problem;
    std::mt19937_64 rng(config().seed);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    EpsPoint eps = bisector(3, 0.1);
    PartialFraction fixed = partial_fraction_fixed(p);
    PartialFraction mov = partial_fraction_movable(p, eps);
    double worst = 0.0;
    for (int tested = 0; tested < 1000;) {
        cplx tau(U(rng), U(rng));
        bool far = true;
        for (cplx q : fixed.poles) far = far && std::abs(tau - q) > 0.1 * fixed.min_pole_gap();
        for (cplx q : mov.poles) far = far && std::abs(tau - q) > 0.1 * mov.min_pole_gap();
        if (!far) continue;
        ++tested;
        cplx a = 1.0 / fixed_factor(p, tau);
        worst = std::max(worst, std::abs(a - fixed.eval(tau)) / std::abs(a));
        a = 1.0 / movable_factor(p, eps, tau);
        worst = std::max(worst, std::abs(a - mov.eval(tau)) / std::abs(a));
    }
    const double ex = double(p.movable_gap()) / (p.k * p.s1 * p.s2);
    double scaling = 0.0;
    for (double mod : {0.1, 0.05, 0.02}) {
        auto hi = partial_fraction_movable(p, {mod, eps.arg}).poles;
        auto lo = partial_fraction_movable(p, {mod / 10.0, eps.arg}).poles;
        for (std::size_t j = 0; j < hi.size(); ++j)
            scaling = std::max(scaling, std::abs(std::abs(lo[j]) / std::abs(hi[j]) / std::pow(0.1, ex) - 1.0));
    }
    return {worst <= 1e-10 && scaling <= 1e-10,
            "identity " + fmt("%.2e", worst) + ", decade scaling " + fmt("%.2e", scaling) + " (tol 1e-10)"};
}

Outcome domination() {
    const RunConfig& cfg = config();
    const auto& p = cfg.problem;
    const int B = 25;
    std::string detail;
    bool ok = true;
    for (double mod : {0.1, 0.05, 0.02}) {
        EpsPoint e = bisector(0, mod);
        CoefficientEngine eng = make_engine(p, cfg.geometry, 0, e, cfg.coeffs.t_abs_max, cfg.solver);
        CoefficientTable tab = eng.compute(cfg.initial, B);
        std::vector<double> init = eng.initial_norms(cfg.initial);
        RayPrefactorBounds rb = ray_prefactor_bounds(eng.prefactors(), eng.grid().gamma());
        MajorantConstants mc = majorant_constants(p, mod, B, rb);
        MajorantTable maj = majorant_recursion(init, p, mod, mc.C4(), mc.C41, B);
        DominationReport dom = verify_domination(tab, maj);
        ok = ok && dom.dominated();
        detail += "eps " + fmt("%g", mod) + ": " + std::to_string(dom.violations.size()) + "+" +
                  std::to_string(dom.envelope_violations.size()) + " violations, envelope ratio " +
                  fmt("%.3g", dom.envelope_ratio) + "; ";
    }
    return {ok, detail + "beta <= 25"};
}

Outcome pde_residual_check() {
    const RunConfig& cfg = config();
    const auto& sv = cfg.solve;
    const int coarse = 1 << (cfg.residual.levels - 1);
    int n = int(std::floor(std::log(sv.t_max / sv.t_min) / sv.h)) + 1;
    n = (n - 1) / coarse * coarse + 1;
    std::vector<EpsPoint> eps;
    for (double m : sv.eps_moduli) eps.push_back(bisector(sv.sector, m));
    SolutionField f = assemble_solution(cfg.problem, cfg.geometry, sv.sector, eps,
                                        log_line(sv.t_arg, sv.t_min, sv.h, n), {0.0}, cfg.initial, cfg.solver);
    double Z0 = 0.0;
    for (const auto& m : f.majorants) Z0 = std::max(Z0, m.Z0);
    f.z.clear();
    for (int q = 0; q < sv.z_points; ++q) f.z.push_back(std::polar(sv.z_factor / Z0, 2.0 * kPi * q / sv.z_points));
    ResidualReport r = pde_residual(f, cfg.problem, cfg.residual);
    double order = 1e300;
    for (double o : r.observed_order) order = std::min(order, o);
    // A fourth-order stencil observed over two halvings; 3.8 leaves room for the preasymptotic drift.
    bool ok = r.below_budget() && order >= 3.8;
    return {ok, "residual " + fmt("%.2e", r.max_relative.back()) + " vs budget " + fmt("%.2e", r.budget) +
                    ", observed order " + fmt("%.3f", order) + " (>= 3.8), " + std::to_string(n) + " t points"};
}

Outcome two_levels() {
    const RunConfig& cfg = config();
    if (cfg.campaign.samples < 8) return {false, "campaign uses fewer than 8 samples"};
    CampaignReport r = verify_two_levels(cfg.problem, cfg.geometry, cfg.initial, cfg.solver, cfg.campaign);
    double first_lo = 1e300, first_hi = 0.0, second = 0.0, r2 = 1.0;
    int empty = 0;
    for (const auto& g : r.gaps) {
        if (g.status == "EMPTY") ++empty;
        if (g.status != "OK") continue;
        r2 = std::min(r2, g.fit.r_squared);
        if (g.predicted.case_id == GapCase::FirstKindOnly) {
            first_lo = std::min(first_lo, g.fit.rhat);
            first_hi = std::max(first_hi, g.fit.rhat);
        } else if (g.predicted.case_id == GapCase::SecondKind) {
            second = std::max(second, g.fit.rhat);
        }
    }
    const auto& p = cfg.problem;
    return {r.passed(), "first-kind rhat " + fmt("%.3f", first_lo) + ".." + fmt("%.3f", first_hi) + " (" +
                            fmt("%.2f", double(p.r2) / p.s2) + "), second-kind " + fmt("%.3f", second) + " (" +
                            fmt("%.2f", double(p.r1) / p.s1) + "), min r^2 " + fmt("%.5f", r2) + ", " +
                            std::to_string(empty) + " empty gaps null " + (r.empty_null_ok ? "ok" : "FAILED")};
}

// Euler-type family sum_p Gamma(1 + p/k) T^p; its Borel sum is tau / (k (1 - tau)^2).
GevreyRemainderReport euler_family(int k, double T_max) {
    RayQuadrature q;
    q.gamma = kPi / 2;
    std::vector<cplx> a(16, 0.0);
    for (int p = 1; p < 16; ++p) a[p] = std::tgamma(1.0 + double(p) / k);
    auto f = [k](cplx u) { return u / (double(k) * (1.0 - u) * (1.0 - u)); };
    std::vector<std::pair<cplx, cplx>> vals;
    const double T_min = 0.02;
    for (int j = 0; j < 12; ++j) {
        cplx T = std::polar(T_min * std::pow(T_max / T_min, j / 11.0), q.gamma);
        vals.push_back({T, mk_laplace_ray(f, k, q, T)});
    }
    return gevrey_remainder_check(vals, TruncatedSeries(a), k);
}

Outcome remainder_envelope() {
    bool ok = true;
    std::string detail;
    for (int k : {2, 3}) {
        GevreyRemainderReport full = euler_family(k, 0.4), half = euler_family(k, 0.2);
        double dC = std::abs(half.C / full.C - 1.0), dM = std::abs(half.M / full.M - 1.0);
        ok = ok && dC <= 0.1 && dM <= 0.1 && std::isfinite(full.M);
        detail += "k=" + std::to_string(k) + ": C " + fmt("%.3f", full.C) + "/" + fmt("%.3f", half.C) + ", M " +
                  fmt("%.3f", full.M) + "/" + fmt("%.3f", half.M) + "; ";
    }
    return {ok, detail + "window |T| <= 0.4 vs 0.2"};
}

Outcome epsilon_recursion() {
    const RunConfig& cfg = config();
    const auto& p = cfg.problem;
    // Synthetic polynomial data: random t-polynomials for every z^j, j < S, and l <= 5.
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> N;
    std::vector<std::vector<std::vector<cplx>>> init(6, std::vector<std::vector<cplx>>(p.S));
    for (auto& l : init)
        for (auto& j : l) {
            j.assign(5, 0.0);
            for (int i = 1; i < 5; ++i) j[i] = {N(rng), N(rng)};
        }
    EpsilonJet synth = formal_jet(p, init, 5, 30, 12);
    double synth_rel = epsilon_recursion_check(synth, p).max_relative;
    EpsilonJet ref = formal_jet(p, initial_jets(p, cfg.initial, 5, 11), 5, 11, 10);
    double ref_rel = epsilon_recursion_check(ref, p).max_relative;

    JetFitSpec spec;
    spec.sector = 10;
    JetFitReport fit = fit_epsilon_jet(p, cfg.geometry, cfg.initial, cfg.solver, spec);
    bool ok = synth_rel <= 1e-12 && ref_rel <= 1e-12 && fit.within_budget();
    return {ok, "synthetic " + fmt("%.2e", synth_rel) + ", reference " + fmt("%.2e", ref_rel) +
                    " (tol 1e-12); fitted mismatch " + fmt("%.2e", fit.recursion.max_mismatch) + " vs budget " +
                    fmt("%.2e", fit.budget) + ", sector agreement " + fmt("%.1e", fit.sector_agreement)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "operator expansion exactness", 1.0, operator_expansion},
        {2, "Borel/Laplace round trip", 10.0, round_trip},
        {3, "convolution identity", 5.0, convolution_identity},
        {4, "partial-fraction identities", 5.0, partial_fractions},
        {5, "majorant domination", 120.0, domination},
        {6, "PDE residual", 300.0, pde_residual_check},
        {7, "two-level Gevrey decay", 1800.0, two_levels},
        {8, "Gevrey remainder envelope", 60.0, remainder_envelope},
        {9, "epsilon recursion consistency", 120.0, epsilon_recursion},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass && dt <= c.limit_s;
        if (o.pass && !pass) o.detail += "; over the time limit";
        failed += !pass;
        std::printf("%s %d %s: %s [%.2f s / %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    dt, c.limit_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
