#include "magbill/metrics.hpp"

#include <cmath>

namespace magbill {

MagneticMetric MagneticMetric::constant(double R) {
    MagneticMetric m;
    m.u.value = [R](Vec2 x) { return x.y / (2.0 * R); };
    m.u.gradient = [R](Vec2) { return Vec2{0.0, 1.0 / (2.0 * R)}; };
    m.w.value = [R](Vec2 x) { return -x.x / (2.0 * R); };
    m.w.gradient = [R](Vec2) { return Vec2{-1.0 / (2.0 * R), 0.0}; };
    return m;
}

ScalarField field_strength(const MagneticMetric& m) {
    ScalarField B;
    const ScalarField u = m.u, w = m.w;
    B.value = [u, w](Vec2 x) { return u.gradient(x).y - w.gradient(x).x; };
    return B;
}

double magnetic_lagrangian_eval(const MagneticMetric& m, Vec2 x, Vec2 v) {
    return norm(v) + m.u.value(x) * v.x + m.w.value(x) * v.y;
}

double lagrangian_eval(const PlanarMetric& m, Vec2 x, Vec2 v) {
    return norm(v) * m.support(x, heading(v));
}

PlanarMetric euclidean_metric() {
    PlanarMetric m;
    m.support = [](Vec2, double) { return 1.0; };
    m.support_dalpha = [](Vec2, double) { return 0.0; };
    m.jet = [](Vec2, double) {
        SupportJet j;
        j.p = 1.0;
        j.curvature_denom = 1.0;
        return j;
    };
    m.reflection = ReflectionRule::kEqualAngles;
    return m;
}

PlanarMetric magnetic_metric(const MagneticMetric& mm) {
    PlanarMetric m;
    m.support = [mm](Vec2 x, double a) {
        return 1.0 + mm.u.value(x) * std::cos(a) + mm.w.value(x) * std::sin(a);
    };
    m.support_dalpha = [mm](Vec2 x, double a) {
        return -mm.u.value(x) * std::sin(a) + mm.w.value(x) * std::cos(a);
    };
    m.jet = [mm](Vec2 x, double a) {
        const double c = std::cos(a), s = std::sin(a);
        const double uv = mm.u.value(x), wv = mm.w.value(x);
        const Vec2 ug = mm.u.gradient(x), wg = mm.w.gradient(x);
        SupportJet j;
        j.p = 1.0 + uv * c + wv * s;
        j.p_a = -uv * s + wv * c;
        j.p_aa = -uv * c - wv * s;
        j.p_x1 = ug.x * c + wg.x * s;
        j.p_x2 = ug.y * c + wg.y * s;
        j.p_ax1 = -ug.x * s + wg.x * c;
        j.p_ax2 = -ug.y * s + wg.y * c;
        j.curvature_denom = 1.0;  // p + p_aa collapses exactly
        return j;
    };
    m.reflection = ReflectionRule::kEqualAngles;
    return m;
}

namespace {

// Integrals for the circle-metric support representation over [0, A]:
//   out[0] = Int cos(a - phi) g          out[1] = Int sin(a - phi) g
//   out[2] = Int cos(a - phi) g_x1       out[3] = Int cos(a - phi) g_x2
//   out[4] = Int sin(a - phi) g_x1       out[5] = Int sin(a - phi) g_x2
std::array<double, 6> circle_kernel_integrals(const CircleMetric& c, Vec2 x,
                                              double alpha, double upper,
                                              double rel_tol) {
    auto f = [&](double phi) {
        const Vec2 q = x + c.R * unit_vector(phi);
        const double gv = c.g.value(q);
        const Vec2 gr = c.g.gradient(q);
        const double cs = std::cos(alpha - phi), sn = std::sin(alpha - phi);
        return std::array<double, 6>{cs * gv,   sn * gv,   cs * gr.x,
                                     cs * gr.y, sn * gr.x, sn * gr.y};
    };
    return quad_vec<6>(f, 0.0, upper, rel_tol);
}

std::array<double, 2> circle_value_integrals(const CircleMetric& c, Vec2 x,
                                             double alpha, double upper,
                                             double rel_tol) {
    auto f = [&](double phi) {
        const double gv = c.g.value(x + c.R * unit_vector(phi));
        return std::array<double, 2>{std::cos(alpha - phi) * gv,
                                     std::sin(alpha - phi) * gv};
    };
    return quad_vec<2>(f, 0.0, upper, rel_tol);
}

}  // namespace

double circle_support(const CircleMetric& c, Vec2 x, double alpha,
                      const Tolerances& tol) {
    auto f = [&](double phi) {
        return std::cos(alpha - phi) * c.g.value(x + c.R * unit_vector(phi));
    };
    const double integral = quad_1d(f, 0.0, alpha + kPi / 2.0, tol);
    return c.gauge.a.value(x) * std::cos(alpha) +
           c.gauge.b.value(x) * std::sin(alpha) + integral;
}

double circle_support_aa(const CircleMetric& c, Vec2 x, double alpha,
                         const Tolerances& tol) {
    auto f = [&](double phi) {
        return std::cos(alpha - phi) * c.g.value(x + c.R * unit_vector(phi));
    };
    const double integral = quad_1d(f, 0.0, alpha + kPi / 2.0, tol);
    const double boundary = c.g.value(x + c.R * unit_vector(alpha + kPi / 2.0));
    return -c.gauge.a.value(x) * std::cos(alpha) -
           c.gauge.b.value(x) * std::sin(alpha) + boundary - integral;
}

double support_to_curvature(const CircleMetric& c, Vec2 x, double alpha,
                            const Tolerances& tol) {
    return circle_support(c, x, alpha, tol) + circle_support_aa(c, x, alpha, tol);
}

PlanarMetric circle_metric_support(const CircleMetric& c, const Tolerances& tol) {
    PlanarMetric m;
    const double rel = tol.quad_rel;
    m.support = [c, tol](Vec2 x, double a) { return circle_support(c, x, a, tol); };
    m.support_dalpha = [c, rel](Vec2 x, double a) {
        const auto iv = circle_value_integrals(c, x, a, a + kPi / 2.0, rel);
        return -c.gauge.a.value(x) * std::sin(a) +
               c.gauge.b.value(x) * std::cos(a) - iv[1];
    };
    m.jet = [c, rel](Vec2 x, double alpha) {
        const double a = reduce_2pi(alpha);
        const auto iv = circle_kernel_integrals(c, x, a, a + kPi / 2.0, rel);
        const double cs = std::cos(a), sn = std::sin(a);
        const double av = c.gauge.a.value(x), bv = c.gauge.b.value(x);
        const Vec2 ag = c.gauge.a.gradient(x), bg = c.gauge.b.gradient(x);
        const double f = c.g.value({x.x - c.R * sn, x.y + c.R * cs});
        SupportJet j;
        j.p = av * cs + bv * sn + iv[0];
        j.p_a = -av * sn + bv * cs - iv[1];
        j.p_aa = f - j.p;
        j.p_x1 = ag.x * cs + bg.x * sn + iv[2];
        j.p_x2 = ag.y * cs + bg.y * sn + iv[3];
        j.p_ax1 = -ag.x * sn + bg.x * cs - iv[4];
        j.p_ax2 = -ag.y * sn + bg.y * cs - iv[5];
        j.curvature_denom = f;
        return j;
    };
    m.reflection = ReflectionRule::kIndicatrix;
    m.R = c.R;
    return m;
}

double hamel_eval(const ProjectiveMetric& pm, Vec2 x, Vec2 v,
                  const Tolerances& tol) {
    if (norm(v) == 0.0) throw std::invalid_argument("hamel_eval: v must be nonzero");
    const double a = heading(v);
    auto kernel = [&](double phi) {
        return std::cos(a - phi) * pm.f(x.x * std::cos(phi) + x.y * std::sin(phi), phi);
    };
    // |cos(a - phi)| kinks at a +- pi/2: integrate the smooth halves.
    const double pos = quad_1d(kernel, a - kPi / 2.0, a + kPi / 2.0, tol);
    const double neg = quad_1d(kernel, a + kPi / 2.0, a + 3.0 * kPi / 2.0, tol);
    return norm(v) * (pos - neg);
}

PlanarMetric hamel_metric(const ProjectiveMetric& pm, const Tolerances& tol) {
    PlanarMetric m;
    m.support = [pm, tol](Vec2 x, double a) {
        return hamel_eval(pm, x, unit_vector(a), tol);
    };
    m.support_dalpha = [pm, tol](Vec2 x, double a) {
        auto kernel = [&](double phi) {
            return std::sin(a - phi) *
                   pm.f(x.x * std::cos(phi) + x.y * std::sin(phi), phi);
        };
        // Boundary terms vanish: the cos kernel is zero at the split points.
        return -quad_1d(kernel, a - kPi / 2.0, a + kPi / 2.0, tol) +
               quad_1d(kernel, a + kPi / 2.0, a + 3.0 * kPi / 2.0, tol);
    };
    m.reflection = ReflectionRule::kIndicatrix;
    return m;
}

GaugeForm canonical_gauge(const ScalarField& g, double R, const Tolerances& tol) {
    GaugeForm gf;
    gf.a.value = [g, R, tol](Vec2 x) {
        auto f = [&](double s) { return g.value({x.x + R, s}); };
        return quad_1d(f, 0.0, x.y, tol) / R;
    };
    gf.a.gradient = [g, R, tol](Vec2 x) {
        auto f = [&](double s) { return g.gradient({x.x + R, s}).x; };
        const double ax1 = quad_1d(f, 0.0, x.y, tol) / R;
        return Vec2{ax1, g.value({x.x + R, x.y}) / R};
    };
    gf.b = constant_field(0.0);
    return gf;
}

MetricValidationReport validate_circle_metric(const CircleMetric& c,
                                              const ProbeGrid& probes,
                                              const Tolerances& tol) {
    MetricValidationReport rep;
    rep.min_density = 1e300;
    for (int i = 0; i < probes.nx; ++i) {
        for (int j = 0; j < probes.ny; ++j) {
            const Vec2 x{
                probes.lo.x + (probes.hi.x - probes.lo.x) * i / (probes.nx - 1),
                probes.lo.y + (probes.hi.y - probes.lo.y) * j / (probes.ny - 1)};

            auto moments = quad_vec<2>(
                [&](double a) {
                    const double gv = c.g.value(x + c.R * unit_vector(a));
                    return std::array<double, 2>{gv * std::cos(a), gv * std::sin(a)};
                },
                0.0, kTwoPi, tol.quad_rel);
            rep.max_center_residual = std::max(
                rep.max_center_residual,
                std::max(std::abs(moments[0]), std::abs(moments[1])));

            const double lhs = c.gauge.a.gradient(x).y - c.gauge.b.gradient(x).x;
            const double rhs = c.g.value({x.x + c.R, x.y}) / c.R;
            rep.max_gauge_residual =
                std::max(rep.max_gauge_residual, std::abs(lhs - rhs));
        }
    }
    // Positivity scanned over the probe box plus the R-circle reach.
    const int fine = 64;
    for (int i = 0; i <= fine; ++i)
        for (int j = 0; j <= fine; ++j) {
            const Vec2 x{probes.lo.x - c.R +
                             (probes.hi.x - probes.lo.x + 2.0 * c.R) * i / fine,
                         probes.lo.y - c.R +
                             (probes.hi.y - probes.lo.y + 2.0 * c.R) * j / fine};
            rep.min_density = std::min(rep.min_density, c.g.value(x));
        }
    return rep;
}

Indicatrix indicatrix_at(const PlanarMetric& m, Vec2 x) {
    const int n = 720;
    double p_max = -1e300, p_min = 1e300;
    double theta_min = 0.0;
    for (int i = 0; i < n; ++i) {
        const double th = kTwoPi * i / n;
        const double p = m.support(x, th);
        p_max = std::max(p_max, p);
        if (p < p_min) {
            p_min = p;
            theta_min = th;
        }
    }
    if (!(p_min > 1e-9 * std::max(p_max, 0.0)))
        throw DegenerateMetricError(
            "indicatrix_at: support function not positive near heading theta = " +
            std::to_string(theta_min));
    Indicatrix ind;
    ind.x = x;
    ind.radius = [m, x](double th) { return 1.0 / m.support(x, th); };
    ind.radius_deriv = [m, x](double th) {
        const double p = m.support(x, th);
        return -m.support_dalpha(x, th) / (p * p);
    };
    return ind;
}

}  // namespace magbill
