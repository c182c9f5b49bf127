#pragma once

#include <utility>
#include <vector>

#include "magbill/curves.hpp"
#include "magbill/fields.hpp"
#include "magbill/metrics.hpp"

namespace magbill {

/// Area form omega = -(1/R) g(u,v) du ^ dv on the plane of circle centers.
struct CircleSpaceForm {
    double R = 1.0;
    ScalarField g;
};

/// Omega-area enclosed by a closed boundary of centers:
/// -(1/R) * Int g du dv, computed as the boundary line integral of a
/// u-antiderivative P of g (dP/du = g), so non-simple boundaries carry the
/// signed multiplicity automatically. Uses g.antideriv_x1 when present,
/// otherwise an inner quadrature from u = 0.
double omega_area(const CircleSpaceForm& form, const ParametricCurve& boundary,
                  const Tolerances& tol);
double omega_area(const CircleSpaceForm& form, const OrientedCurve& boundary,
                  const Tolerances& tol);

/// Integral of g over the disc of the given center and radius, by polar
/// quadrature: Gauss-Legendre radially, trapezoid in angle.
double disc_integral(const ScalarField& g, Vec2 center, double R,
                     int n_radial = 48, int n_angular = 256);

/// (Int g cos, Int g sin) over the circle of radius R about the center.
std::pair<double, double> circle_orthogonality(const ScalarField& g, Vec2 center,
                                               double R, const Tolerances& tol);

/// Finsler length of the counterclockwise R-circle about the center, by
/// quadrature of |v| p along it.
double circle_finsler_length(const CircleMetric& c, Vec2 center,
                             const Tolerances& tol);

/// Both sides of the length-area identity: lhs is the Finsler length of
/// gamma; rhs is the omega-area bounded by the inward front Gamma(-R) plus
/// the common length C of R-circles (computed at reference_center and not
/// assumed to be pi R).
std::pair<double, double> length_area_check(const CircleMetric& c,
                                            const ParametricCurve& gamma,
                                            const Tolerances& tol,
                                            Vec2 reference_center = {0.0, 0.0});

struct ConstancyReport {
    std::vector<double> lengths;
    double mean = 0.0;
    double max_spread = 0.0;  // max - min
};

/// Finsler length of the counterclockwise R-circle at each probe center.
ConstancyReport circle_length_constancy(const CircleMetric& c,
                                        const std::vector<Vec2>& centers,
                                        const Tolerances& tol);

}  // namespace magbill
