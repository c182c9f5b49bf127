#pragma once

#include <functional>

#include "magbill/numerics.hpp"
#include "magbill/vec2.hpp"

namespace magbill {

struct SymMat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

/// A scalar function of a plane point with an analytic gradient. The geodesic
/// machinery differentiates under integral signs, so gradients must be exact,
/// not finite differences. antideriv_x1, when present, is any A(x) with
/// dA/dx1 = value; it turns region integrals into boundary line integrals.
struct ScalarField {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> gradient;
    std::function<SymMat2(Vec2)> second_partials;  // optional (may be empty)
    std::function<double(Vec2)> antideriv_x1;      // optional (may be empty)
};

ScalarField constant_field(double c);

/// g(x) = x1. The standard inadmissible density used as a negative control.
ScalarField coordinate_field_x1();

/// Max relative mismatch between the analytic gradient and central finite
/// differences of value over the probe points (validation hook).
double gradient_check(const ScalarField& f, const std::vector<Vec2>& probes,
                      double fd_step = 1e-5);

}  // namespace magbill
