#pragma once

#include <functional>
#include <string>
#include <vector>

#include "magbill/errors.hpp"
#include "magbill/fields.hpp"
#include "magbill/numerics.hpp"
#include "magbill/vec2.hpp"

namespace magbill {

/// The 1-form a dx1 + b dx2 entering the circle-geodesic Lagrangian. Only
/// a_x2 - b_x1 is pinned down (it must equal g(x1+R, x2)/R); the rest is a
/// gauge choice.
struct GaugeForm {
    ScalarField a;
    ScalarField b;
};

/// Weak magnetic metric L(x,v) = |v| + alpha(x)(v) with alpha = u dx1 + w dx2.
/// The field strength is B = u_x2 - w_x1; for |alpha| < 1 the Lagrangian is a
/// (non-symmetric) Finsler metric.
struct MagneticMetric {
    ScalarField u;
    ScalarField w;

    /// Constant-field gauge u = x2/(2R), w = -x1/(2R): unit-speed extremals
    /// are counterclockwise circles of radius R.
    static MagneticMetric constant(double R);
};

/// Derived field strength B = u_x2 - w_x1 as a value-only field (gradient
/// evaluators are left empty).
ScalarField field_strength(const MagneticMetric& m);

/// Data of the circle-geodesic Lagrangian L = |v| p(x, alpha) with
///   p(x,a) = a(x) cos a + b(x) sin a
///          + Int_0^{a+pi/2} cos(a - phi) g(x1 + R cos phi, x2 + R sin phi) dphi.
struct CircleMetric {
    double R = 1.0;
    ScalarField g;
    GaugeForm gauge;
};

/// Translation-covariant Lagrangian on oriented lines: L(x,v) is the integral
/// of |v1 cos phi + v2 sin phi| f(x1 cos phi + x2 sin phi, phi) over a period.
struct ProjectiveMetric {
    std::function<double(double, double)> f;  // f(p, phi) > 0
};

/// Polar description of the unit-velocity curve at a point: r(theta) = 1/p.
struct Indicatrix {
    Vec2 x;
    std::function<double(double)> radius;
    std::function<double(double)> radius_deriv;
};

/// Support function value and every partial the arclength geodesic reduction
/// needs. curvature_denom is p + p_aa computed by the exact route where one
/// exists (for CircleMetric it is g at the circle-translated point).
struct SupportJet {
    double p = 0.0;
    double p_a = 0.0;
    double p_aa = 0.0;
    double p_x1 = 0.0;
    double p_x2 = 0.0;
    double p_ax1 = 0.0;
    double p_ax2 = 0.0;
    double curvature_denom = 0.0;
};

enum class ReflectionRule { kEqualAngles, kIndicatrix };

/// Uniform runtime handle over the metric families. jet may be empty for
/// metrics whose geodesics are never integrated (projective ones). For jet
/// evaluation the heading is reduced mod 2pi, which is exact whenever the
/// density satisfies the circle center-of-mass condition.
struct PlanarMetric {
    std::function<double(Vec2, double)> support;         // p(x, alpha)
    std::function<double(Vec2, double)> support_dalpha;  // dp/dalpha
    std::function<SupportJet(Vec2, double)> jet;
    ReflectionRule reflection = ReflectionRule::kIndicatrix;
    double R = 0.0;  // reference radius when the family has one
};

PlanarMetric euclidean_metric();
PlanarMetric magnetic_metric(const MagneticMetric& m);
PlanarMetric circle_metric_support(const CircleMetric& c, const Tolerances& tol);
PlanarMetric hamel_metric(const ProjectiveMetric& pm, const Tolerances& tol);

/// L(x,v) = |v| + alpha(x)(v).
double magnetic_lagrangian_eval(const MagneticMetric& m, Vec2 x, Vec2 v);

/// L(x,v) = |v| p(x, heading of v) for any support-based metric.
double lagrangian_eval(const PlanarMetric& m, Vec2 x, Vec2 v);

/// The support value p(x, alpha) of a CircleMetric by adaptive quadrature.
double circle_support(const CircleMetric& c, Vec2 x, double alpha,
                      const Tolerances& tol);

/// Second alpha-derivative of p by differentiation under the integral sign
/// (differentiated kernel plus the boundary term from the moving limit).
double circle_support_aa(const CircleMetric& c, Vec2 x, double alpha,
                         const Tolerances& tol);

/// p + p_aa assembled from the two quadrature routes above. Equals the
/// density at the circle-translated point g(x1 - R sin a, x2 + R cos a).
double support_to_curvature(const CircleMetric& c, Vec2 x, double alpha,
                            const Tolerances& tol);

/// Hamel-form Lagrangian by quadrature, split at the kernel kinks.
double hamel_eval(const ProjectiveMetric& pm, Vec2 x, Vec2 v, const Tolerances& tol);

/// Canonical gauge b = 0, a(x) = (1/R) Int_0^{x2} g(x1 + R, s) ds. Value and
/// x1-derivative by quadrature, x2-derivative exact.
GaugeForm canonical_gauge(const ScalarField& g, double R, const Tolerances& tol);

struct ProbeGrid {
    Vec2 lo{-2.0, -2.0};
    Vec2 hi{2.0, 2.0};
    int nx = 21;
    int ny = 21;
};

/// Admissibility report over a probe grid: (i) the cosine/sine moments of g
/// on probe circles (center-of-mass condition), (ii) the gauge identity
/// a_x2 - b_x1 = g(x1+R, x2)/R, (iii) positivity of g. Violations are data.
struct MetricValidationReport {
    double max_center_residual = 0.0;
    double max_gauge_residual = 0.0;
    double min_density = 0.0;

    bool passed(double tol = 1e-8) const {
        return max_center_residual < tol && max_gauge_residual < tol &&
               min_density > 0.0;
    }
};

MetricValidationReport validate_circle_metric(const CircleMetric& c,
                                              const ProbeGrid& probes,
                                              const Tolerances& tol);

/// Indicatrix at x, with a positivity scan of p over 720 headings. Throws
/// DegenerateMetricError naming the offending heading when p drops below
/// 1e-9 times its maximum (a relative threshold: tangential zeros of p must
/// be caught even though a grid never lands on them exactly).
Indicatrix indicatrix_at(const PlanarMetric& m, Vec2 x);

}  // namespace magbill
