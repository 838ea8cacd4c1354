#pragma once

namespace gevlab {

// Reduce an angle to [0, 2*pi).
double wrap_angle(double a);

// Smallest absolute difference between two directions, in [0, pi].
double angular_distance(double a, double b);

// Counter-clockwise sweep from `from` to `to`, in [0, 2*pi).
double ccw_span(double from, double to);

// Closed arc swept counter-clockwise from `from` to `to`.
bool in_closed_arc(double x, double from, double to);

// Shorter closed arc between two rays, returned as (start, span) with span in [0, pi].
struct Arc {
    double start;
    double span;
};
Arc shorter_arc(double a, double b);

// Distance from a direction to a closed arc (0 when inside).
double distance_to_arc(double x, const Arc& arc);

}  // namespace gevlab
