#include "magbill/circle_space.hpp"

#include <cmath>

#include "magbill/magnetic_geometry.hpp"

namespace magbill {

namespace {

// A u-antiderivative of g: closed form when the field carries one, otherwise
// a quadrature from u = 0 along the horizontal line through the point.
double potential_u(const ScalarField& g, Vec2 x, const Tolerances& tol) {
    if (g.antideriv_x1) return g.antideriv_x1(x);
    return quad_1d([&](double s) { return g.value({s, x.y}); }, 0.0, x.x, tol);
}

}  // namespace

double omega_area(const CircleSpaceForm& form, const ParametricCurve& boundary,
                  const Tolerances& tol) {
    auto f = [&](double th) {
        return potential_u(form.g, boundary.point(th), tol) *
               boundary.velocity(th).y;
    };
    return -quad_1d(f, 0.0, kTwoPi, tol) / form.R;
}

double omega_area(const CircleSpaceForm& form, const OrientedCurve& boundary,
                  const Tolerances& tol) {
    // Per-segment Gauss rule; the polyline is already a discretization.
    static const auto rule = [] {
        std::pair<std::vector<double>, std::vector<double>> r;
        gauss_legendre(16, r.first, r.second);
        return r;
    }();
    const auto& [nodes, weights] = rule;
    double integral = 0.0;
    const std::size_t n = boundary.vertices.size();
    const std::size_t segs = boundary.closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i) {
        const Vec2 a = boundary.vertices[i];
        const Vec2 b = boundary.vertices[(i + 1) % n];
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const Vec2 p = a + 0.5 * (nodes[k] + 1.0) * (b - a);
            integral += 0.5 * weights[k] * potential_u(form.g, p, tol) * (b.y - a.y);
        }
    }
    return -integral / form.R;
}

double disc_integral(const ScalarField& g, Vec2 center, double R, int n_radial,
                     int n_angular) {
    std::vector<double> nodes, weights;
    gauss_legendre(n_radial, nodes, weights);
    double total = 0.0;
    for (int i = 0; i < n_radial; ++i) {
        const double r = 0.5 * R * (nodes[i] + 1.0);
        double ring = 0.0;
        for (int j = 0; j < n_angular; ++j)
            ring += g.value(center + r * unit_vector(kTwoPi * j / n_angular));
        total += 0.5 * R * weights[i] * r * ring * (kTwoPi / n_angular);
    }
    return total;
}

std::pair<double, double> circle_orthogonality(const ScalarField& g, Vec2 center,
                                               double R, const Tolerances& tol) {
    const auto m = quad_vec<2>(
        [&](double a) {
            const double gv = g.value(center + R * unit_vector(a));
            return std::array<double, 2>{gv * std::cos(a), gv * std::sin(a)};
        },
        0.0, kTwoPi, tol.quad_rel);
    return {m[0], m[1]};
}

double circle_finsler_length(const CircleMetric& c, Vec2 center,
                             const Tolerances& tol) {
    // x(psi) = center + R e(psi), heading psi + pi/2, |v| = R.
    Tolerances outer = tol;
    outer.quad_rel = std::max(tol.quad_rel, 1e-9);
    auto f = [&](double psi) {
        return c.R * circle_support(c, center + c.R * unit_vector(psi),
                                    psi + kPi / 2.0, tol);
    };
    return quad_1d(f, 0.0, kTwoPi, outer);
}

std::pair<double, double> length_area_check(const CircleMetric& c,
                                            const ParametricCurve& gamma,
                                            const Tolerances& tol,
                                            Vec2 reference_center) {
    Tolerances outer = tol;
    outer.quad_rel = std::max(tol.quad_rel, 1e-9);
    auto lhs_f = [&](double th) {
        const Vec2 v = gamma.velocity(th);
        return norm(v) * circle_support(c, gamma.point(th), heading(v), tol);
    };
    const double lhs = quad_1d(lhs_f, 0.0, kTwoPi, outer);

    const CircleSpaceForm form{c.R, c.g};
    const double area = omega_area(form, wave_front(gamma, -c.R), outer);
    const double C = circle_finsler_length(c, reference_center, tol);
    return {lhs, area + C};
}

ConstancyReport circle_length_constancy(const CircleMetric& c,
                                        const std::vector<Vec2>& centers,
                                        const Tolerances& tol) {
    ConstancyReport rep;
    rep.lengths.reserve(centers.size());
    double lo = 1e300, hi = -1e300, sum = 0.0;
    for (const Vec2& x : centers) {
        const double len = circle_finsler_length(c, x, tol);
        rep.lengths.push_back(len);
        lo = std::min(lo, len);
        hi = std::max(hi, len);
        sum += len;
    }
    rep.mean = centers.empty() ? 0.0 : sum / static_cast<double>(centers.size());
    rep.max_spread = centers.empty() ? 0.0 : hi - lo;
    return rep;
}

}  // namespace magbill
