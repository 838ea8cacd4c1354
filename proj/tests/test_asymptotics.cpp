#include <doctest.h>

#include <cmath>
#include <random>

#include "gevlab/asymptotics.hpp"
#include "support.hpp"

using namespace gevlab;

namespace {

std::vector<FitSample> synthetic(double lo, double hi, int n, double (*D)(double)) {
    std::vector<FitSample> s;
    for (int i = 0; i < n; ++i) {
        double e = hi * std::pow(lo / hi, double(i) / (n - 1));
        s.push_back({e, D(e)});
    }
    return s;
}

}  // namespace

TEST_CASE("decay fit recovers a synthetic level") {
    auto s = synthetic(0.1, 0.3, 10, [](double e) { return 3.0 * std::exp(-2.0 / std::pow(e, 1.5)); });
    GevreyFit f = fit_decay(s);
    CHECK(f.rhat == doctest::Approx(1.5).epsilon(0.02 / 1.5));
    CHECK(f.M == doctest::Approx(2.0).epsilon(0.05 / 2.0));
    CHECK(f.K == doctest::Approx(3.0).epsilon(0.05));
    CHECK(f.r_squared > 0.999);

    GevreyFitReport rep = fit_gevrey_level(s, 1e-300);
    CHECK(rep.status == "OK");
    CHECK(rep.monotone);
    CHECK(rep.loo_max_change < 0.05);
    CHECK_FALSE(rep.noise_flag);
}

TEST_CASE("a mixture is dominated by the slower level") {
    auto s = synthetic(0.05, 0.15, 10,
                       [](double e) { return std::exp(-1.0 / std::sqrt(e)) + std::exp(-1.0 / (e * e)); });
    GevreyFit f = fit_decay(s);
    CHECK(f.rhat == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("decay fit rejects flat and bad input") {
    std::vector<FitSample> flat;
    for (int i = 0; i < 10; ++i) flat.push_back({0.2 - 0.01 * i, 1e-3});
    try {
        fit_decay(flat);
        FAIL("expected INSUFFICIENT_DECAY");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientDecay);
    }
    CHECK_THROWS_AS(fit_gevrey_level(flat, 1e-300), Error);
    CHECK_THROWS_AS(fit_decay({{0.1, 1.0}, {0.05, 0.5}}), Error);

    // Samples under the noise floor are flagged.
    auto s = synthetic(0.1, 0.3, 10, [](double e) { return 3.0 * std::exp(-2.0 / std::pow(e, 1.5)); });
    GevreyFitReport rep = fit_gevrey_level(s, s.back().difference);
    CHECK(rep.noise_flag);
}

TEST_CASE("difference of a field with itself is zero") {
    const RunConfig& cfg = testing::reference_config();
    const Sector& sec = cfg.geometry.covering[2];
    std::vector<EpsPoint> eps{sec.point(0.1, sec.bisector())};
    std::vector<cplx> t = log_line(0.2, 0.4, 0.3, 3);
    std::vector<cplx> z{0.0, 0.02};
    SolutionField a = assemble_solution(cfg.problem, cfg.geometry, 2, eps, t, z, cfg.initial, cfg.solver);
    CHECK(measure_difference(a, a, 0) == 0.0);

    SolutionField b = a;
    b.t.pop_back();
    CHECK_THROWS_AS(measure_difference(a, b, 0), Error);
    b = a;
    b.z[1] = 0.03;
    CHECK_THROWS_AS(measure_difference(a, b, 0), Error);
}

TEST_CASE("campaign on zero data is degenerate") {
    const RunConfig& cfg = testing::reference_config();
    std::vector<InitialDatum> zero(4, InitialDatum::zero());
    CampaignSpec spec = cfg.campaign;
    spec.gaps = {0, 11};
    CampaignReport rep = verify_two_levels(cfg.problem, cfg.geometry, zero, cfg.solver, spec);
    CHECK(rep.degenerate);
    CHECK_FALSE(rep.passed());
    REQUIRE(rep.gaps.size() == 2);
    for (const auto& g : rep.gaps)
        for (double d : g.candidate_differences) CHECK(d == 0.0);
}

TEST_CASE("a single first-kind gap decays at the predicted level") {
    const RunConfig& cfg = testing::reference_config();
    GevreyFitReport r = measure_gap(cfg.problem, cfg.geometry, cfg.initial, cfg.solver, cfg.campaign, 0);
    CHECK(r.predicted.case_id == GapCase::FirstKindOnly);
    CHECK(r.status == "OK");
    CHECK(r.relative_error() <= cfg.campaign.tolerance);
    CHECK(r.monotone);
}
