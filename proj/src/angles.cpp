#include "gevlab/angles.hpp"

#include <algorithm>
#include <cmath>

#include "gevlab/common.hpp"

namespace gevlab {

double wrap_angle(double a) {
    double r = std::fmod(a, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    if (r >= 2.0 * kPi) r = 0.0;
    return r;
}

double angular_distance(double a, double b) {
    double d = wrap_angle(a - b);
    return std::min(d, 2.0 * kPi - d);
}

double ccw_span(double from, double to) { return wrap_angle(to - from); }

bool in_closed_arc(double x, double from, double to) {
    constexpr double tol = 1e-13;
    double span = ccw_span(from, to);
    double pos = ccw_span(from, x);
    if (pos > 2.0 * kPi - tol) pos = 0.0;
    return pos <= span + tol;
}

Arc shorter_arc(double a, double b) {
    double ab = ccw_span(a, b);
    if (ab <= kPi) return {wrap_angle(a), ab};
    return {wrap_angle(b), 2.0 * kPi - ab};
}

double distance_to_arc(double x, const Arc& arc) {
    double end = arc.start + arc.span;
    if (in_closed_arc(x, arc.start, end)) return 0.0;
    return std::min(angular_distance(x, arc.start), angular_distance(x, end));
}

}  // namespace gevlab
