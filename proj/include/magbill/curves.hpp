#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "magbill/numerics.hpp"
#include "magbill/vec2.hpp"

namespace magbill {

/// Polyline curve. Closed curves do not repeat the first vertex. headings,
/// when non-empty, carry the exact tangent heading at each vertex (used by
/// wave fronts; otherwise central differences are substituted).
struct OrientedCurve {
    std::vector<Vec2> vertices;
    bool closed = true;
    std::vector<double> headings;
};

double polyline_length(const OrientedCurve& c);

/// Signed area as the line integral of (x dy - y dx)/2 over the segments.
/// Counterclockwise simple curves give a positive value; the convention
/// extends to immersed curves.
double polyline_signed_area(const OrientedCurve& c);

/// Whitney winding number of a closed polyline: total exterior turning / 2pi.
double polyline_turning_number(const OrientedCurve& c);

/// Convexity + counterclockwise orientation via the cross-product turning test.
bool is_convex_ccw(const OrientedCurve& c);

/// Smooth closed curve on theta in [0, 2pi). acceleration may be empty when a
/// wave front of the curve is never requested.
struct ParametricCurve {
    std::function<Vec2(double)> point;
    std::function<Vec2(double)> velocity;
    std::function<Vec2(double)> acceleration;
};

double curve_length(const ParametricCurve& c, const Tolerances& tol);
double curve_signed_area(const ParametricCurve& c, const Tolerances& tol);
double curve_turning_number(const ParametricCurve& c, const Tolerances& tol);

/// Sample into a polyline with exact per-vertex tangent headings.
OrientedCurve sample_curve(const ParametricCurve& c, int n);

ParametricCurve make_circle(Vec2 center, double r, bool ccw = true);
ParametricCurve make_ellipse(Vec2 center, double a, double b);

/// Convex curve from a support function h(theta) = c0 + sum of harmonics:
/// point = h e(theta) + h' Je(theta). Requires h + h'' > 0 (checked on a
/// scan); the curvature radius at normal angle theta is exactly h + h''.
struct SupportCoeffs {
    double c0 = 1.0;
    std::vector<double> cos_k;  // coefficient of cos(k theta), k = 1,2,...
    std::vector<double> sin_k;
};
ParametricCurve support_form_curve(const SupportCoeffs& h);

/// Strictly convex support coefficients drawn from rng, scaled until
/// min(h + h'') exceeds the given floor.
SupportCoeffs random_convex_support(std::uint64_t seed, int max_harmonic = 4,
                                    double amplitude = 0.15, double floor = 0.2);

}  // namespace magbill
