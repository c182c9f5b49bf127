#pragma once

#include <string>
#include <vector>

#include "magbill/fields.hpp"
#include "magbill/metrics.hpp"
#include "magbill/vec2.hpp"

namespace magbill {

/// Sampled unit-speed solution curve. alpha is the heading, unwrapped so it
/// is continuous (no 2pi jumps). max_speed_error records the worst deviation
/// of |v| from 1 when the flow carries an explicit velocity.
struct Trajectory {
    struct Sample {
        double s;
        Vec2 x;
        double alpha;
    };
    std::vector<Sample> samples;
    double step = 0.0;
    double max_speed_error = 0.0;
};

struct CircleFit {
    Vec2 center;
    double radius = 0.0;
    double rms_residual = 0.0;
};

/// Unit-speed magnetic flow x'' = B(x) J x'.
Trajectory integrate_magnetic_flow(const ScalarField& B, Vec2 x0, Vec2 v0,
                                   double s_max, double h);

/// Arclength reduction of the geodesic equation for L = |v| p(x, alpha):
///   dx/ds = (cos a, sin a)
///   da/ds = (p_x2 cos a - p_x1 sin a - p_ax1 cos a - p_ax2 sin a) / (p + p_aa).
/// Throws DegenerateMetricError if the denominator is not positive.
Trajectory integrate_finsler_geodesic(const PlanarMetric& m, Vec2 x0,
                                      double alpha0, double s_max, double h);

/// Residual of the circle-extremal equation at v = (cos a, sin a):
/// (|v|/R) L_vv(Jv) + L_vx(v) - L_x, assembled from the support jet. Zero
/// exactly when every extremal through (x, a) is a counterclockwise R-circle.
Vec2 el_residual(const CircleMetric& c, Vec2 x, double alpha,
                 const Tolerances& tol);

/// Least-squares circle: algebraic (Kasa) fit followed by Gauss-Newton
/// geometric refinement. Throws CollinearPointsError on degenerate input.
CircleFit fit_circle_points(const std::vector<Vec2>& pts);
CircleFit fit_circle(const Trajectory& t);

/// CSV with header s,x1,x2,alpha at 17 significant digits.
void write_trajectory_csv(const Trajectory& t, const std::string& path);

}  // namespace magbill
