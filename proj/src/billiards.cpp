#include "magbill/billiards.hpp"

#include <algorithm>
#include <cmath>

#include "magbill/numerics.hpp"

namespace magbill {

namespace {

constexpr double kGrazingSin = 1e-8;

double circular_distance(double a, double b) {
    return std::abs(wrap_angle(a - b));
}

}  // namespace

ReflectionResult finsler_reflect(const Indicatrix& I, double boundary_dir,
                                 Vec2 u_in) {
    const double theta_in = heading(u_in);
    if (std::abs(std::sin(theta_in - boundary_dir)) < kGrazingSin)
        return {u_in, true};

    auto point = [&I](double th) { return I.radius(th) * unit_vector(th); };
    auto tangent = [&I](double th) {
        return I.radius_deriv(th) * unit_vector(th) +
               I.radius(th) * rot90(unit_vector(th));
    };

    const Vec2 t = unit_vector(boundary_dir);
    const Vec2 u0 = point(theta_in);
    const Vec2 du0 = tangent(theta_in);
    const double denom = cross(t, du0);
    if (std::abs(denom) < kGrazingSin * norm(du0)) return {u_in, true};

    // Tangent lines at u(theta) and at u_in meet the boundary line at Z.
    const Vec2 Z = (cross(u0, du0) / denom) * t;
    auto F = [&](double th) { return cross(point(th) - Z, tangent(th)); };

    const double side = cross(t, u0) > 0.0 ? 1.0 : -1.0;
    const double margin = 1e-6;
    const double lo =
        (side > 0.0 ? boundary_dir - kPi : boundary_dir) + margin;
    const double hi = (side > 0.0 ? boundary_dir : boundary_dir + kPi) - margin;

    const double mirror = 2.0 * boundary_dir - theta_in;
    const auto brackets = scan_brackets(F, lo, hi, 2048);
    double best = 0.0;
    bool found = false;
    for (const auto& [a, b] : brackets) {
        const double root = bisect(F, a, b, 1e-13);
        if (!found || circular_distance(root, mirror) <
                          circular_distance(best, mirror)) {
            best = root;
            found = true;
        }
    }
    if (!found)
        throw std::runtime_error(
            "finsler_reflect: no outgoing tangent point found (indicatrix not "
            "quadratically convex?)");
    return {point(best), false};
}

double projective_reflect(const ProjectiveMetric& pm, Vec2 x, double alpha,
                          double beta, const Tolerances& tol) {
    if (std::abs(std::sin(beta - alpha)) < kGrazingSin)
        throw std::invalid_argument("projective_reflect: beta == alpha (mod pi)");

    auto kernel = [&](double phi) {
        return std::cos(alpha - phi) *
               pm.f(x.x * std::cos(phi) + x.y * std::sin(phi), phi);
    };
    auto defect = [&](double gamma) {
        return quad_1d(kernel, gamma - kPi / 2.0, beta - kPi / 2.0, tol) -
               quad_1d(kernel, gamma + kPi / 2.0, beta + kPi / 2.0, tol);
    };

    // Outgoing sector: sin(gamma - alpha) has the sign opposite to the
    // incoming side.
    const double side = std::sin(beta - alpha) > 0.0 ? 1.0 : -1.0;
    const double margin = 1e-6;
    const double lo = (side > 0.0 ? alpha - kPi : alpha) + margin;
    const double hi = (side > 0.0 ? alpha : alpha + kPi) - margin;

    double mirror = 2.0 * alpha - beta;
    mirror = lo + reduce_2pi(mirror - lo);  // representative inside the scan window
    const auto brackets = scan_brackets(defect, lo, hi, 256);
    double best = 0.0;
    bool found = false;
    for (const auto& [a, b] : brackets) {
        const double root = bisect(defect, a, b, tol.root_tol);
        if (!found ||
            circular_distance(root, mirror) < circular_distance(best, mirror)) {
            best = root;
            found = true;
        }
    }
    if (!found)
        throw std::runtime_error(
            "projective_reflect: no root in the outgoing sector (invalid f or "
            "geometry)");
    return best;
}

double focal_conic_residual(const OrientedCurve& curve) {
    const std::size_t n = curve.vertices.size();
    if (n < 8) throw std::invalid_argument("focal_conic_residual: too few samples");

    // Least squares of 1/r over {1, cos, sin}: exact for focal conics.
    double s11 = 0, s1c = 0, s1s = 0, scc = 0, scs = 0, sss = 0;
    double b1 = 0, bc = 0, bs = 0;
    std::vector<double> theta(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        theta[i] = heading(curve.vertices[i]);
        r[i] = norm(curve.vertices[i]);
        if (!(r[i] > 0.0))
            throw std::invalid_argument("focal_conic_residual: curve through origin");
        const double c = std::cos(theta[i]), s = std::sin(theta[i]);
        const double y = 1.0 / r[i];
        s11 += 1.0;
        s1c += c;
        s1s += s;
        scc += c * c;
        scs += c * s;
        sss += s * s;
        b1 += y;
        bc += y * c;
        bs += y * s;
    }
    // Solve the symmetric 3x3 normal system by Cramer.
    const double det = s11 * (scc * sss - scs * scs) - s1c * (s1c * sss - scs * s1s) +
                       s1s * (s1c * scs - scc * s1s);
    if (std::abs(det) < 1e-12 * n * n * n)
        throw std::invalid_argument("focal_conic_residual: degenerate sample set");
    const double A = (b1 * (scc * sss - scs * scs) - s1c * (bc * sss - scs * bs) +
                      s1s * (bc * scs - scc * bs)) / det;
    const double B = (s11 * (bc * sss - scs * bs) - b1 * (s1c * sss - scs * s1s) +
                      s1s * (s1c * bs - bc * s1s)) / det;
    const double C = (s11 * (scc * bs - bc * scs) - s1c * (s1c * bs - bc * s1s) +
                      b1 * (s1c * scs - scc * s1s)) / det;

    double ss = 0.0, mean_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double denom = A + B * std::cos(theta[i]) + C * std::sin(theta[i]);
        const double model = 1.0 / denom;
        ss += (model - r[i]) * (model - r[i]);
        mean_r += r[i];
    }
    mean_r /= static_cast<double>(n);
    return std::sqrt(ss / static_cast<double>(n)) / mean_r;
}

double bisector_residual(const std::function<double(double)>& radius,
                         const std::function<double(double)>& radius_deriv,
                         double t1, double t2) {
    auto point = [&](double t) { return radius(t) * unit_vector(t); };
    auto tangent = [&](double t) {
        return radius_deriv(t) * unit_vector(t) + radius(t) * rot90(unit_vector(t));
    };
    const Vec2 X = point(t1), Y = point(t2);
    const Vec2 dX = tangent(t1), dY = tangent(t2);
    const double denom = cross(dX, dY);
    if (std::abs(denom) < 1e-14)
        throw std::invalid_argument("bisector_residual: parallel tangents");
    const Vec2 Z = X + (cross(Y - X, dY) / denom) * dX;
    return cross(Y, Z) / norm(Y) - cross(Z, X) / norm(X);
}

Boundary implicit_boundary(std::function<double(Vec2)> f, double level,
                           Vec2 reference, double fd_step) {
    Boundary b;
    b.side = [f, level](Vec2 x) { return level - f(x); };
    b.tangent_heading = [f, fd_step](Vec2 x) {
        const double gx =
            (f({x.x + fd_step, x.y}) - f({x.x - fd_step, x.y})) / (2.0 * fd_step);
        const double gy =
            (f({x.x, x.y + fd_step}) - f({x.x, x.y - fd_step})) / (2.0 * fd_step);
        // f grows outward; counterclockwise tangent is the gradient rotated
        // a quarter turn.
        return heading(rot90(Vec2{gx, gy}));
    };
    b.param = [reference](Vec2 x) { return reduce_2pi(heading(x - reference)); };
    return b;
}

Boundary disc_boundary(Vec2 center, double radius) {
    Boundary b = implicit_boundary(
        [center](Vec2 x) { return norm(x - center); }, radius, center);
    // Exact tangents for the disc.
    b.tangent_heading = [center](Vec2 x) {
        return heading(rot90(x - center));
    };
    OrientedCurve poly;
    poly.closed = true;
    for (int i = 0; i < 512; ++i)
        poly.vertices.push_back(center + radius * unit_vector(kTwoPi * i / 512.0));
    b.polyline = std::move(poly);
    return b;
}

Boundary polyline_boundary(const OrientedCurve& poly) {
    if (!is_convex_ccw(poly))
        throw std::invalid_argument(
            "polyline_boundary: boundary must be a convex counterclockwise polyline");
    Boundary b;
    b.polyline = poly;
    const auto verts = poly.vertices;
    b.side = [verts](Vec2 x) {
        double worst = 1e300;
        const std::size_t n = verts.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 e = verts[(i + 1) % n] - verts[i];
            worst = std::min(worst, cross(e, x - verts[i]) / norm(e));
        }
        return worst;
    };
    b.tangent_heading = [verts](Vec2 x) {
        const std::size_t n = verts.size();
        double best_d = 1e300;
        double best_heading = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a = verts[i], e = verts[(i + 1) % n] - verts[i];
            const double t = std::clamp(dot(x - a, e) / norm2(e), 0.0, 1.0);
            const double d = norm(x - (a + t * e));
            if (d < best_d) {
                best_d = d;
                best_heading = heading(e);
            }
        }
        return best_heading;
    };
    Vec2 centroid{0, 0};
    for (const Vec2& v : verts) centroid += v;
    centroid = centroid / static_cast<double>(verts.size());
    b.param = [verts, centroid](Vec2 x) {
        return reduce_2pi(heading(x - centroid));
    };
    return b;
}

BilliardState billiard_step(const BilliardTable& table, const BilliardState& s,
                            std::vector<Vec2>* chord) {
    if (!table.metric.jet)
        throw std::invalid_argument("billiard_step: metric provides no support jet");
    const double h = table.step;
    double cap = table.arc_cap;
    if (cap <= 0.0) {
        if (!(table.metric.R > 0.0))
            throw std::invalid_argument(
                "billiard_step: arc_cap required for metrics without a radius");
        cap = 4.0 * kPi * table.metric.R;
    }

    auto rk4_step = [&table](Vec2& x, double& a, double hs) {
        auto deriv = [&table](Vec2 p, double al) -> std::array<double, 3> {
            const SupportJet j = table.metric.jet(p, al);
            if (!(j.curvature_denom > 0.0))
                throw DegenerateMetricError("billiard_step: degenerate metric on chord");
            const double c = std::cos(al), sn = std::sin(al);
            const double num =
                j.p_x2 * c - j.p_x1 * sn - j.p_ax1 * c - j.p_ax2 * sn;
            return {c, sn, num / j.curvature_denom};
        };
        const auto k1 = deriv(x, a);
        const auto k2 = deriv(x + 0.5 * hs * Vec2{k1[0], k1[1]}, a + 0.5 * hs * k1[2]);
        const auto k3 = deriv(x + 0.5 * hs * Vec2{k2[0], k2[1]}, a + 0.5 * hs * k2[2]);
        const auto k4 = deriv(x + hs * Vec2{k3[0], k3[1]}, a + hs * k3[2]);
        x += hs / 6.0 * Vec2{k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0],
                             k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]};
        a += hs / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
    };

    Vec2 x = s.point;
    double alpha = s.direction;
    bool found = false;
    bool first = true;
    if (chord) {
        chord->clear();
        chord->push_back(x);
    }
    Vec2 x_prev = x;
    double a_prev = alpha;
    for (double traveled = 0.0; traveled < cap; traveled += h) {
        x_prev = x;
        a_prev = alpha;
        const double sigma_prev = table.boundary.side(x);
        rk4_step(x, alpha, h);
        const double sigma = table.boundary.side(x);
        // The launch point sits on the boundary (sigma ~ 0 up to rounding),
        // so the first step may cross with sigma_prev at either sign; a
        // tangential launch then lands on the hit point immediately and the
        // grazing check below reports it.
        if (sigma <= 0.0 && (sigma_prev > 0.0 || first)) {
            found = true;
            break;
        }
        first = false;
        if (chord) chord->push_back(x);
    }
    if (!found)
        throw TrappedOrbitError(
            "billiard_step: no boundary return within the arclength cap");

    // Refine the crossing arclength within the last step by bisection.
    double lo = 0.0, hi = h;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        Vec2 xt = x_prev;
        double at = a_prev;
        rk4_step(xt, at, mid);
        if (table.boundary.side(xt) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    Vec2 x_hit = x_prev;
    double beta = a_prev;
    rk4_step(x_hit, beta, 0.5 * (lo + hi));
    if (chord) chord->push_back(x_hit);

    const double tang = table.boundary.tangent_heading(x_hit);
    if (std::abs(std::sin(beta - tang)) < kGrazingSin)
        throw GrazingError("billiard_step: tangential boundary hit");

    double gamma;
    if (table.metric.reflection == ReflectionRule::kEqualAngles) {
        gamma = 2.0 * tang - beta;
    } else {
        const Indicatrix ind = indicatrix_at(table.metric, x_hit);
        const auto res =
            finsler_reflect(ind, tang, ind.radius(beta) * unit_vector(beta));
        if (res.grazing) throw GrazingError("billiard_step: grazing reflection");
        gamma = heading(res.v);
    }
    return {table.boundary.param(x_hit), x_hit, gamma};
}

}  // namespace magbill
