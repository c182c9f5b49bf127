#pragma once

#include <utility>

#include "magbill/curves.hpp"
#include "magbill/errors.hpp"
#include "magbill/levelset.hpp"
#include "magbill/numerics.hpp"
#include "magbill/vec2.hpp"

namespace magbill {

/// Counterclockwise arc of radius R: from angle start to start + sweep about
/// the center, sweep in (0, 2pi].
struct ArcSpec {
    Vec2 center;
    double R = 1.0;
    double start = 0.0;
    double sweep = kTwoPi;
};

/// Constant-field Finsler length of a geodesic arc:
/// d(A,B) = sweep*R/2 + [B - A, C]/(2R). Depends on absolute positions (the
/// Lagrangian's gauge is anchored at the origin), as the closed form does.
double arc_distance(double R, const ArcSpec& arc);

/// Distance induced by the constant-field Lagrangian: minimum over the two
/// counterclockwise R-arcs from A to B. Throws UnreachablePointsError when
/// |AB| > 2R (no R-arc joins the points); returns 0 for A = B.
double point_distance(double R, Vec2 A, Vec2 B);

/// Both arc values (minor-sweep arc first) for inspection.
std::pair<double, double> point_distance_both(double R, Vec2 A, Vec2 B);

/// l(gamma) - S(gamma)/R for a closed polyline. Exact for polylines: the
/// Lagrangian line integral along each straight segment contributes its
/// Euclidean length minus the swept-area term.
double finsler_length_closed(const OrientedCurve& gamma, double R);
double finsler_length_closed(const ParametricCurve& gamma, double R,
                             const Tolerances& tol);

/// Time-t wave front: every point displaced distance t along the coorienting
/// normal (the pair (coorientation, orientation) is positively oriented; for
/// a counterclockwise curve the coorientation is outward). Cusps permitted.
OrientedCurve wave_front(const OrientedCurve& gamma, double t);
ParametricCurve wave_front(const ParametricCurve& gamma, double t);

/// Length from the area of the inward front:
/// (1/R) (pi R^2 w - S(Gamma(-R))) with w the Whitney winding number of
/// gamma. For counterclockwise simple curves w = 1 and this is the plain
/// front-area formula; carrying w keeps the identity with
/// finsler_length_closed exact for clockwise curves as well (the clockwise
/// unit circle must come out as 3 pi).
double length_via_front(const OrientedCurve& gamma, double R);
double length_via_front(const ParametricCurve& gamma, double R,
                        const Tolerances& tol);

/// Shortest counterclockwise loop from X around a circular obstacle
/// (center O, radius rho < R), orientation agreeing with the obstacle:
/// outgoing R-arc internally tangent to the obstacle, obstacle arc, R-arc
/// back. Tangency data is closed form: tangent R-circle centers lie at
/// distance R - rho from O.
struct StringLoop {
    double length = 0.0;
    Vec2 center_out, center_in;    // Larmor centers of the two legs
    Vec2 touch_out, touch_in;      // tangency points on the obstacle
    double launch_heading = 0.0;   // outgoing direction at X
};

StringLoop string_loop(Vec2 O, double rho, double R, Vec2 X);
double string_function(Vec2 O, double rho, double R, Vec2 X);

/// Level set {F = c} of the string function, sampled radially (bisection in
/// distance per direction).
OrientedCurve string_level_set(Vec2 O, double rho, double R, double c,
                               int n_samples);

/// Locus {X : d(A,X) + d(X,B) = c} extracted by marching squares with
/// bisection refinement. Returns an empty curve when the locus is empty.
OrientedCurve magnetic_ellipse(Vec2 A, Vec2 B, double c, double R,
                               int grid = 400);

/// d(A,X) + d(X,B), or a poison value (1e18) where either leg is undefined.
double ellipse_sum_distance(Vec2 A, Vec2 B, double R, Vec2 X);

}  // namespace magbill
