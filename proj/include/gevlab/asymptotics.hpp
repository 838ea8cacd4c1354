#pragma once

#include <string>
#include <vector>

#include "gevlab/geometry.hpp"
#include "gevlab/solver.hpp"

namespace gevlab {

// sup over the shared (t, z) grid of |X_b - X_a| at eps sample e of both fields.
double measure_difference(const SolutionField& a, const SolutionField& b, int e);

struct FitSample {
    double eps_abs;
    double difference;
};

struct GevreyFit {
    double rhat = 0.0;
    double M = 0.0;
    double K = 0.0;
    double r_squared = 0.0;
    int iterations = 0;
};

// log D = log K - M |eps|^{-rhat}: first pass with K = e * max D on log(-log(D/K)) against
// log|eps|, then Levenberg-Marquardt on all three parameters. Throws INSUFFICIENT_DECAY when D
// does not shrink over the sample range.
GevreyFit fit_decay(const std::vector<FitSample>& samples);

struct GevreyFitReport {
    int gap = 0;  // sector pair (gap, gap + 1)
    GapClassification predicted;
    std::vector<double> eps;         // strictly decreasing
    std::vector<double> differences;
    double noise_floor = 0.0;
    GevreyFit fit;
    bool noise_flag = false;         // some sample below noise_factor * noise
    bool monotone = false;
    double loo_max_change = 0.0;     // max relative change of rhat when one sample is dropped
    double decades = 0.0;
    double z_radius = 0.0;
    std::vector<double> candidate_eps;   // every eps evaluated, with its difference
    std::vector<double> candidate_differences;
    std::string status = "OK";       // OK, NOISE_FLOOR, INSUFFICIENT_DECAY, EMPTY, SKIPPED
    double relative_error() const;   // |rhat - predicted| / predicted
};

GevreyFitReport fit_gevrey_level(const std::vector<FitSample>& samples, double noise_floor,
                                 double noise_factor = 10.0);

struct EpsWindow {
    double eps_max = 0.158;
    double eps_min = 0.05;
    int candidates = 14;  // geometric candidates from eps_max down to eps_min
};

struct CampaignSpec {
    std::vector<int> gaps;  // empty: every gap
    int samples = 10;
    EpsWindow first_kind{0.158, 0.06, 14};
    EpsWindow second_kind{0.031, 0.004, 14};
    EpsWindow empty{0.158, 0.0075, 6};
    int t_points = 4;
    double t_arg = 0.0;      // argument of the t samples (radians)
    int z_points = 16;
    double z_factor = 0.45;  // |z| = z_factor / Z0 at the largest eps of the gap
    double noise_factor = 10.0;
    double guard = 100.0;    // window samples need D >= guard * noise
    double tolerance = 0.10;
};

struct CampaignReport {
    std::vector<GevreyFitReport> gaps;
    std::vector<int> first_kind_gaps;   // I_1
    std::vector<int> second_kind_gaps;  // I_2
    bool has_first = false;
    bool has_second = false;
    bool levels_match = false;     // every fitted gap within tolerance
    bool ordering_ok = false;      // every second-kind rhat < every first-kind rhat
    bool empty_null_ok = false;    // EMPTY gaps below noise_factor * noise
    bool r2_ok = false;            // r^2 >= 0.98 on fitted gaps
    bool degenerate = false;       // all initial data zero
    bool passed() const {
        return has_first && has_second && levels_match && ordering_ok && empty_null_ok && r2_ok;
    }
};

// Assemble neighbouring solutions along each overlap bisector and fit the decay of their
// differences against the predicted level of each gap.
CampaignReport verify_two_levels(const ProblemParams& p, const GeometryConfig& g,
                                 const std::vector<InitialDatum>& data, const SolverOptions& opt,
                                 const CampaignSpec& spec);

// One gap; exposed for the CLI `fit` command and for tests.
GevreyFitReport measure_gap(const ProblemParams& p, const GeometryConfig& g,
                            const std::vector<InitialDatum>& data, const SolverOptions& opt,
                            const CampaignSpec& spec, int gap);

}  // namespace gevlab
