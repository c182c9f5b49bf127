#include "magbill/geodesics.hpp"

#include <cmath>
#include <sstream>

#include "magbill/errors.hpp"
#include "magbill/io.hpp"
#include "magbill/numerics.hpp"

namespace magbill {

Trajectory integrate_magnetic_flow(const ScalarField& B, Vec2 x0, Vec2 v0,
                                   double s_max, double h) {
    auto deriv = [&B](double, const std::array<double, 4>& y) {
        const double b = B.value({y[0], y[1]});
        return std::array<double, 4>{y[2], y[3], -b * y[3], b * y[2]};
    };
    const auto sol =
        rk4_integrate<4>(deriv, {x0.x, x0.y, v0.x, v0.y}, s_max, h);

    Trajectory t;
    t.step = h;
    t.samples.reserve(sol.s.size());
    double prev_alpha = 0.0;
    for (std::size_t i = 0; i < sol.s.size(); ++i) {
        const auto& y = sol.y[i];
        const Vec2 v{y[2], y[3]};
        double a = heading(v);
        if (i > 0) a = prev_alpha + wrap_angle(a - prev_alpha);  // unwrap
        prev_alpha = a;
        t.samples.push_back({sol.s[i], {y[0], y[1]}, a});
        t.max_speed_error = std::max(t.max_speed_error, std::abs(norm(v) - 1.0));
    }
    return t;
}

Trajectory integrate_finsler_geodesic(const PlanarMetric& m, Vec2 x0,
                                      double alpha0, double s_max, double h) {
    if (!m.jet)
        throw std::invalid_argument(
            "integrate_finsler_geodesic: metric provides no support jet");
    auto deriv = [&m](double s, const std::array<double, 3>& y) {
        const Vec2 x{y[0], y[1]};
        const double a = y[2];
        const SupportJet j = m.jet(x, a);
        if (!(j.curvature_denom > 0.0))
            throw DegenerateMetricError(
                "integrate_finsler_geodesic: p + p_aa <= 0 at s = " +
                std::to_string(s) + ", x = (" + std::to_string(x.x) + ", " +
                std::to_string(x.y) + ")");
        const double c = std::cos(a), sn = std::sin(a);
        const double num =
            j.p_x2 * c - j.p_x1 * sn - j.p_ax1 * c - j.p_ax2 * sn;
        return std::array<double, 3>{c, sn, num / j.curvature_denom};
    };
    const auto sol = rk4_integrate<3>(deriv, {x0.x, x0.y, alpha0}, s_max, h);

    Trajectory t;
    t.step = h;
    t.samples.reserve(sol.s.size());
    for (std::size_t i = 0; i < sol.s.size(); ++i)
        t.samples.push_back({sol.s[i], {sol.y[i][0], sol.y[i][1]}, sol.y[i][2]});
    return t;
}

Vec2 el_residual(const CircleMetric& c, Vec2 x, double alpha,
                 const Tolerances& tol) {
    const PlanarMetric m = circle_metric_support(c, tol);
    const SupportJet j = m.jet(x, alpha);
    const double cs = std::cos(alpha), sn = std::sin(alpha);
    const double num = j.p_x2 * cs - j.p_x1 * sn - j.p_ax1 * cs - j.p_ax2 * sn;
    const double local = j.curvature_denom / c.R - num;

    // The equation also forces the momentum L_v = p e + p_a Je to be single
    // valued in the heading. Its defect around a full turn is carried by the
    // circle moments of the density; both must vanish for the representation
    // to define one Lagrangian.
    const auto mom = quad_vec<2>(
        [&](double phi) {
            const double gv = c.g.value(x + c.R * unit_vector(phi));
            return std::array<double, 2>{gv * std::cos(phi), gv * std::sin(phi)};
        },
        0.0, kTwoPi, tol.quad_rel);
    const double dp = cs * mom[0] + sn * mom[1];      // p(a + 2pi) - p(a)
    const double dpa = -(sn * mom[0] - cs * mom[1]);  // p_a defect

    return local * Vec2{-sn, cs} + dp * Vec2{cs, sn} + dpa * Vec2{-sn, cs};
}

CircleFit fit_circle_points(const std::vector<Vec2>& pts) {
    const std::size_t n = pts.size();
    if (n < 10)
        throw std::invalid_argument("fit_circle: need at least 10 samples");

    Vec2 mean{0.0, 0.0};
    for (const Vec2& p : pts) mean += p;
    mean = mean / static_cast<double>(n);

    double sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0, sz = 0;
    for (const Vec2& p : pts) {
        const double u = p.x - mean.x, v = p.y - mean.y;
        const double z = u * u + v * v;
        sxx += u * u;
        sxy += u * v;
        syy += v * v;
        sxz += u * z;
        syz += v * z;
        sz += z;
    }
    const double det = sxx * syy - sxy * sxy;
    if (det <= 1e-12 * (sxx + syy) * (sxx + syy))
        throw CollinearPointsError("fit_circle: samples are collinear");

    double uc = (syy * sxz - sxy * syz) / (2.0 * det);
    double vc = (sxx * syz - sxy * sxz) / (2.0 * det);
    double r = std::sqrt(uc * uc + vc * vc + sz / static_cast<double>(n));
    Vec2 center = mean + Vec2{uc, vc};

    // Gauss-Newton on (cx, cy, r) for the orthogonal distances.
    for (int it = 0; it < 20; ++it) {
        double a11 = 0, a12 = 0, a13 = 0, a22 = 0, a23 = 0;
        double b1 = 0, b2 = 0, b3 = 0;
        for (const Vec2& p : pts) {
            const Vec2 d = p - center;
            const double dist = norm(d);
            if (dist == 0.0) continue;
            const double ex = -d.x / dist, ey = -d.y / dist;
            const double res = dist - r;
            a11 += ex * ex;
            a12 += ex * ey;
            a13 += -ex;
            a22 += ey * ey;
            a23 += -ey;
            b1 += -ex * res;
            b2 += -ey * res;
            b3 += res;
        }
        const double a33 = static_cast<double>(n);
        // Solve the symmetric 3x3 normal system by Cramer.
        const double d0 = a11 * (a22 * a33 - a23 * a23) -
                          a12 * (a12 * a33 - a23 * a13) +
                          a13 * (a12 * a23 - a22 * a13);
        if (std::abs(d0) < 1e-300) break;
        const double dx = (b1 * (a22 * a33 - a23 * a23) -
                           a12 * (b2 * a33 - a23 * b3) +
                           a13 * (b2 * a23 - a22 * b3)) / d0;
        const double dy = (a11 * (b2 * a33 - a23 * b3) -
                           b1 * (a12 * a33 - a23 * a13) +
                           a13 * (a12 * b3 - b2 * a13)) / d0;
        const double dr = (a11 * (a22 * b3 - b2 * a23) -
                           a12 * (a12 * b3 - b2 * a13) +
                           b1 * (a12 * a23 - a22 * a13)) / d0;
        center += Vec2{dx, dy};
        r += dr;
        if (std::abs(dx) + std::abs(dy) + std::abs(dr) < 1e-14 * (1.0 + r)) break;
    }

    double ss = 0.0;
    for (const Vec2& p : pts) {
        const double res = norm(p - center) - r;
        ss += res * res;
    }
    return {center, r, std::sqrt(ss / static_cast<double>(n))};
}

CircleFit fit_circle(const Trajectory& t) {
    std::vector<Vec2> pts;
    pts.reserve(t.samples.size());
    for (const auto& s : t.samples) pts.push_back(s.x);
    return fit_circle_points(pts);
}

void write_trajectory_csv(const Trajectory& t, const std::string& path) {
    std::string out = "s,x1,x2,alpha\n";
    for (const auto& s : t.samples) {
        out += format_double(s.s);
        out += ',';
        out += format_double(s.x.x);
        out += ',';
        out += format_double(s.x.y);
        out += ',';
        out += format_double(s.alpha);
        out += '\n';
    }
    atomic_write_text(path, out);
}

}  // namespace magbill
