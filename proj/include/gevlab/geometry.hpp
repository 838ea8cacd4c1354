#pragma once

#include <string>
#include <vector>

#include "gevlab/params.hpp"

namespace gevlab {

std::vector<double> first_kind_directions(const ProblemParams& p);

// Directions d_{E,j} carried by the movable poles for eps in `sector`.
std::vector<double> second_kind_directions(const ProblemParams& p, const Sector& sector);

// Half-width of the forbidden wedge around each second-kind direction of `sector`.
double second_kind_halfwidth(const ProblemParams& p, const Sector& sector);

double rho_of(const ProblemParams& p, double eps_abs);

bool omega_membership(const GeometryConfig& g, const ProblemParams& p, cplx eps, cplx tau,
                      int sector_index);

struct AssumptionItem {
    std::string name;
    bool passed = false;
    double quantity = 0.0;  // the compared value (margin sign conventions in `detail`)
    std::string detail;
};

struct AssumptionReport {
    std::vector<AssumptionItem> items;
    bool all_passed() const;
    std::vector<std::string> failures() const;
};

AssumptionReport check_assumptions(const GeometryConfig& g, const ProblemParams& p);

enum class GapCase { Empty, FirstKindOnly, SecondKind };
const char* to_string(GapCase c);

struct SeparatingDirection {
    double angle;
    bool second_kind;
};

struct GapClassification {
    GapCase case_id = GapCase::Empty;
    int rhat_num = 0;  // predicted level as a fraction, 0/1 for EMPTY
    int rhat_den = 1;
    std::vector<SeparatingDirection> separating;
    double gamma_from = 0.0;  // ray of sector i
    double gamma_to = 0.0;    // ray of sector i+1 expressed in the branch frame of sector i
    double overlap_arg = 0.0; // bisector of the overlap, in the frame of sector i

    double predicted_rhat() const { return double(rhat_num) / double(rhat_den); }
};

// Argument of the bisector of E_i and E_{i+1} in the frame of E_i, and the frame
// offset lift_i - lift_{i+1} (0 or a multiple of 2*pi).
struct Overlap {
    double arg = 0.0;
    double frame_offset = 0.0;
    double opening = 0.0;
};
Overlap sector_overlap(const Sector& a, const Sector& b);

GapClassification classify_gap(const GeometryConfig& g, const ProblemParams& p, int i);

}  // namespace gevlab
