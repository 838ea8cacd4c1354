#include <doctest.h>

#include <cmath>

#include "gevlab/coefficient_engine.hpp"
#include "gevlab/solver.hpp"
#include "support.hpp"

using namespace gevlab;

namespace {

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

EpsPoint bisector_eps(int sector, double mod) {
    const Sector& s = testing::reference_config().geometry.covering[sector];
    return s.point(mod, s.bisector());
}

SolverOptions serial_options() {
    SolverOptions o = testing::reference_config().solver;
    o.exec = Exec::Serial;
    return o;
}

struct Run {
    CoefficientEngine eng;
    CoefficientTable tab;
};

Run run_reference(const std::vector<InitialDatum>& data, double mod, int B, int sector = 0) {
    const RunConfig& cfg = testing::reference_config();
    CoefficientEngine eng = make_engine(cfg.problem, cfg.geometry, sector, bisector_eps(sector, mod), 2.0,
                                        serial_options());
    CoefficientTable tab = eng.compute(data, B);
    return {std::move(eng), std::move(tab)};
}

double max_abs(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("weighted norm examples") {
    RadialGrid grid = RadialGrid::build(0.0, 3.0, 1.0, RadialGridSpec{});
    NormParams np;
    np.sigma = 1.0;
    np.b = 2.0;
    np.k = 2;
    CVec h(grid.size());
    double oracle = 0.0;
    for (int m = 0; m < grid.size(); ++m) {
        double x = grid.radii()[m];
        h[m] = grid.node(m);
        oracle = std::max(oracle, (1.0 + std::pow(x, 4)) * std::exp(-x * x));
    }
    NormValue v = weighted_norm(h, grid, 0, np);
    CHECK(v.value == doctest::Approx(oracle).epsilon(1e-13));
    CHECK_FALSE(v.at_boundary);
    // d/dx (1+x^4) e^{-x^2} = -2x (x^2-1)^2 e^{-x^2} <= 0, so the maximum sits at the first node.
    CHECK(v.argmax == 0);
    const double x0 = grid.radii()[0];
    CHECK(v.value == doctest::Approx((1.0 + std::pow(x0, 4)) * std::exp(-x0 * x0)).epsilon(1e-13));

    // The inverse weight has norm one at every beta.
    for (int beta : {0, 3, 7}) {
        CVec g(grid.size());
        for (int m = 0; m < grid.size(); ++m) {
            double x = grid.radii()[m];
            g[m] = x / (1.0 + std::pow(x, 4)) * std::exp(np.sigma * np.r_b(beta) * x * x);
        }
        CHECK(weighted_norm(g, grid, beta, np).value == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(weighted_norm(CVec::Zero(grid.size()), grid, 0, np).value == 0.0);

    // Norms decrease in beta for a fixed function.
    double prev = 1e300;
    for (int beta = 0; beta <= 10; ++beta) {
        double w = weighted_norm(h, grid, beta, np).value;
        CHECK(w <= prev);
        prev = w;
    }
}

TEST_CASE("convolution step matches the Beta oracle") {
    const int k = 2;
    RadialGrid grid = RadialGrid::build(0.35, 2.0, 1.0, RadialGridSpec{});
    struct Case { double nu, xi; int n; };
    for (Case c : {Case{0.0, 0.0, 0}, Case{0.5, -0.5, 1}, Case{1.5, 0.0, 3}, Case{0.0, -0.5, 2}, Case{2.0, 1.0, 5}}) {
        CVec f(grid.size());
        for (int m = 0; m < grid.size(); ++m) f[m] = std::pow(grid.node(m), c.n);
        const double a = double(c.n) / k;
        for (int m = 3; m < grid.size(); m += 7) {
            cplx tk = std::pow(grid.node(m), k);
            cplx want = tk * std::pow(tk, c.nu + c.xi + a + 1.0) * beta_fn(c.nu + 1.0, c.xi + a + 1.0);
            cplx got = convolution_step(f, grid, c.nu, c.xi, k, m);
            CAPTURE(c.nu);
            CAPTURE(c.xi);
            CHECK(std::abs(got - want) <= 1e-11 * std::abs(want));
        }
    }
    CVec one = CVec::Ones(grid.size());
    const int m = grid.size() - 1;
    CHECK(std::abs(convolution_step(one, grid, 0.0, 0.0, k, m) - std::pow(grid.node(m), 2 * k)) <
          1e-12 * std::pow(grid.radii()[m], 2 * k));
    CHECK(std::abs(convolution_step(CVec::Zero(grid.size()), grid, 0.5, 0.5, k, m)) == 0.0);
}

TEST_CASE("recursion of zero data stays zero") {
    std::vector<InitialDatum> zero(4, InitialDatum::zero());
    Run r = run_reference(zero, 0.1, 12);
    for (const auto& w : r.tab.entries) CHECK(max_abs(w) == 0.0);
}

TEST_CASE("recursion is linear in the initial data") {
    const RunConfig& cfg = testing::reference_config();
    std::vector<InitialDatum> a = cfg.initial;
    std::vector<InitialDatum> b(4, InitialDatum::zero());
    b[0] = InitialDatum::monomial(2, cplx(0.0, 0.5), true);
    b[2] = InitialDatum::monomial(1, -0.3, true);
    std::vector<InitialDatum> sum = b;
    sum[0].family = InitialDatum::Family::Polynomial;
    sum[0].coeffs = {0.0, 1.0, cplx(0.0, 0.5)};
    Run ra = run_reference(a, 0.1, 16);
    Run rb = run_reference(b, 0.1, 16);
    Run rs = run_reference(sum, 0.1, 16);
    for (int beta = 0; beta <= 16; ++beta) {
        CVec lhs = rs.tab.entries[beta];
        CVec rhs = ra.tab.entries[beta] + rb.tab.entries[beta];
        double scale = std::max(max_abs(lhs), 1e-300);
        CAPTURE(beta);
        CHECK(max_abs(lhs - rhs) <= 1e-12 * scale);
    }
    // Doubling the data doubles every coefficient.
    std::vector<InitialDatum> twice = a;
    twice[0].coeffs[twice[0].coeffs.size() - 1] *= 2.0;
    Run rt = run_reference(twice, 0.1, 16);
    for (int beta = 0; beta <= 16; ++beta)
        CHECK(max_abs(rt.tab.entries[beta] - 2.0 * ra.tab.entries[beta]) <=
              1e-13 * std::max(max_abs(rt.tab.entries[beta]), 1e-300));
}

TEST_CASE("coefficients are dominated by the majorant") {
    const RunConfig& cfg = testing::reference_config();
    const auto& p = cfg.problem;
    const int B = cfg.solver.beta_max;
    for (double mod : {0.1, 0.05, 0.02}) {
        Run r = run_reference(cfg.initial, mod, B);
        std::vector<double> init = r.eng.initial_norms(cfg.initial);
        RayPrefactorBounds rb = ray_prefactor_bounds(r.eng.prefactors(), r.eng.grid().gamma());
        MajorantConstants mc = majorant_constants(p, mod, B, rb);
        MajorantTable maj = majorant_recursion(init, p, mod, mc.C4(), mc.C41, B);
        DominationReport dom = verify_domination(r.tab, maj);
        CAPTURE(mod);
        CHECK(dom.dominated());
        CHECK(dom.envelope_ratio <= 1.0);
        CHECK(maj.Z0 > 0.0);
        // The control run with a shrunken C4 must eventually fail.
        double f = domination_control_factor(r.tab, init, p, mod, mc);
        CHECK(f > 0.0);
        CHECK(f < 1.0);
    }
}

TEST_CASE("majorant recursion") {
    const RunConfig& cfg = testing::reference_config();
    const auto& p = cfg.problem;
    MajorantTable zero = majorant_recursion({0.0, 0.0, 0.0, 0.0}, p, 0.1, 1.0, 1.0, 20);
    for (double u : zero.u) CHECK(u == 0.0);

    // The eps power of every triple cancels.
    for (const auto& f : p.forcing) {
        double e = -p.r() * (f.s - f.kappa0) + p.r() * p.k * (double(p.delta(f)) / p.k + f.kappa0);
        CHECK(std::abs(e) < 1e-12);
    }

    // log(u/beta!) becomes linear: the slope over the last third settles.
    MajorantTable m30 = majorant_recursion({1.0, 0.0, 0.0, 0.0}, p, 0.1, 5.0, 3.0, 30);
    MajorantTable m40 = majorant_recursion({1.0, 0.0, 0.0, 0.0}, p, 0.1, 5.0, 3.0, 40);
    CHECK(std::abs(m40.slope_last - m30.slope_last) <= 0.05 * std::abs(m40.slope_last));
    for (int b = 0; b <= 40; ++b) CHECK(m40.u[b] <= m40.M * std::pow(m40.Z0, b) * std::tgamma(b + 1.0) * (1 + 1e-12));
}

TEST_CASE("refining the radial grid leaves the coefficients unchanged") {
    const RunConfig& cfg = testing::reference_config();
    Run coarse = run_reference(cfg.initial, 0.1, 12);
    SolverOptions fine_opt = serial_options();
    fine_opt.grid.panel_order = 24;
    fine_opt.grid.max_width *= 0.5;
    CoefficientEngine fine = make_engine(cfg.problem, cfg.geometry, 0, bisector_eps(0, 0.1), 2.0, fine_opt);
    CoefficientTable ft = fine.compute(cfg.initial, 12);
    for (int beta = 0; beta <= 12; ++beta) {
        double scale = max_abs(coarse.tab.entries[beta]);
        if (scale == 0.0) continue;
        double diff = 0.0;
        for (int m = 0; m < fine.grid().size(); m += 5) {
            double rho = fine.grid().radii()[m];
            if (rho >= coarse.eng.grid().r_max()) break;
            diff = std::max(diff, std::abs(coarse.eng.grid().interpolate(coarse.tab.entries[beta], rho) -
                                           ft.entries[beta][m]));
        }
        CAPTURE(beta);
        CHECK(diff <= 1e-8 * scale);
    }
}
