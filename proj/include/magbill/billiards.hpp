#pragma once

#include <functional>

#include "magbill/curves.hpp"
#include "magbill/errors.hpp"
#include "magbill/metrics.hpp"
#include "magbill/vec2.hpp"

namespace magbill {

struct ReflectionResult {
    Vec2 v;
    bool grazing = false;
};

/// Finsler billiard reflection by the tangent-concurrency construction: the
/// tangent lines to the indicatrix at the incoming velocity u_in and at the
/// outgoing velocity v meet the boundary tangent line (through the origin of
/// the velocity plane, direction boundary_dir) in one point. v is the tangent
/// point on the side of the boundary line opposite to u_in; among numerical
/// candidates the root closest to the equal-angle mirror is taken. Inputs
/// within 1e-8 of grazing (u_in parallel to the boundary, or the tangent at
/// u_in parallel to it) return u_in with the grazing flag set.
ReflectionResult finsler_reflect(const Indicatrix& I, double boundary_dir,
                                 Vec2 u_in);

/// Outgoing direction gamma of the projective (Hamel-form) billiard at x with
/// boundary direction alpha and incoming direction beta, found by bracketed
/// root finding of the reflection identity over the outgoing sector.
double projective_reflect(const ProjectiveMetric& pm, Vec2 x, double alpha,
                          double beta, const Tolerances& tol);

/// Relative rms residual of the best polar fit r = l/(1 + e cos(theta-theta0))
/// to a star-shaped curve (least squares on 1/r over {1, cos, sin}).
/// Near zero exactly for conics with a focus at the origin.
double focal_conic_residual(const OrientedCurve& curve);

/// Equal-angle bisector defect for two points of a star-shaped polar curve:
/// [Y,Z]/|Y| - [Z,X]/|X| with Z the intersection of the tangents at the two
/// parameters. Zero for every pair iff the curve reflects by equal angles.
double bisector_residual(const std::function<double(double)>& radius,
                         const std::function<double(double)>& radius_deriv,
                         double t1, double t2);

/// Table boundary: a signed side function (positive strictly inside), the
/// counterclockwise tangent heading at boundary points, and a scalar boundary
/// parameter for orbit records. polyline is a sampled outline for export and
/// may be empty.
struct Boundary {
    std::function<double(Vec2)> side;
    std::function<double(Vec2)> tangent_heading;
    std::function<double(Vec2)> param;
    OrientedCurve polyline;
};

/// Boundary from a smooth implicit function: inside is {f < level}; tangents
/// come from central differences of f (step fd_step).
Boundary implicit_boundary(std::function<double(Vec2)> f, double level,
                           Vec2 reference, double fd_step = 1e-6);

Boundary disc_boundary(Vec2 center, double radius);

/// Convex counterclockwise polyline boundary (validated).
Boundary polyline_boundary(const OrientedCurve& poly);

struct BilliardTable {
    Boundary boundary;
    PlanarMetric metric;
    double step = 1e-3;
    double arc_cap = 0.0;  ///< 0: defaults to 4 pi R when the metric has an R
};

struct BilliardState {
    double param = 0.0;
    Vec2 point;
    double direction = 0.0;
};

/// One bounce: integrate the metric geodesic from the state until the first
/// transversal boundary crossing (detected on the signed side function and
/// refined by bisection to 1e-12 in arclength), then reflect, by equal angles
/// for the equal-angle family and by finsler_reflect otherwise. Throws
/// TrappedOrbitError when no crossing occurs within the arclength cap and
/// GrazingError on tangential hits. When chord is non-null the traversed
/// geodesic samples (ending at the hit point) are stored there.
BilliardState billiard_step(const BilliardTable& table, const BilliardState& s,
                            std::vector<Vec2>* chord = nullptr);

}  // namespace magbill
