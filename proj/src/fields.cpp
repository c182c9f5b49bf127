#include "magbill/fields.hpp"

#include <cmath>

namespace magbill {

ScalarField constant_field(double c) {
    ScalarField f;
    f.value = [c](Vec2) { return c; };
    f.gradient = [](Vec2) { return Vec2{0.0, 0.0}; };
    f.second_partials = [](Vec2) { return SymMat2{}; };
    f.antideriv_x1 = [c](Vec2 x) { return c * x.x; };
    return f;
}

ScalarField coordinate_field_x1() {
    ScalarField f;
    f.value = [](Vec2 x) { return x.x; };
    f.gradient = [](Vec2) { return Vec2{1.0, 0.0}; };
    f.second_partials = [](Vec2) { return SymMat2{}; };
    f.antideriv_x1 = [](Vec2 x) { return 0.5 * x.x * x.x; };
    return f;
}

double gradient_check(const ScalarField& f, const std::vector<Vec2>& probes,
                      double fd_step) {
    double worst = 0.0;
    for (const Vec2& p : probes) {
        const Vec2 g = f.gradient(p);
        const double gx = (f.value({p.x + fd_step, p.y}) - f.value({p.x - fd_step, p.y})) /
                          (2.0 * fd_step);
        const double gy = (f.value({p.x, p.y + fd_step}) - f.value({p.x, p.y - fd_step})) /
                          (2.0 * fd_step);
        const double scale = 1.0 + norm(g);
        worst = std::max(worst, std::hypot(g.x - gx, g.y - gy) / scale);
    }
    return worst;
}

}  // namespace magbill
