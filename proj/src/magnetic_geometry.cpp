#include "magbill/magnetic_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace magbill {

double arc_distance(double R, const ArcSpec& arc) {
    const Vec2 A = arc.center + arc.R * unit_vector(arc.start);
    const Vec2 B = arc.center + arc.R * unit_vector(arc.start + arc.sweep);
    return 0.5 * arc.sweep * R + cross(B - A, arc.center) / (2.0 * R);
}

std::pair<double, double> point_distance_both(double R, Vec2 A, Vec2 B) {
    const double chord = norm(B - A);
    if (chord > 2.0 * R * (1.0 + 1e-12))
        throw UnreachablePointsError(
            "point_distance: |AB| >= 2R, no counterclockwise R-arc joins the points");
    const double q = std::min(chord / (2.0 * R), 1.0);
    const double half = std::asin(q);             // half-sweep of the minor arc
    const double m = R * std::sqrt(std::max(0.0, 1.0 - q * q));
    const Vec2 mid = 0.5 * (A + B);
    const Vec2 n = (chord > 0.0) ? rot90(B - A) / chord : Vec2{0.0, 0.0};

    // Center above the chord gives the minor counterclockwise sweep 2*half,
    // the one below gives 2pi - 2*half.
    const Vec2 c_minor = mid + m * n;
    const Vec2 c_major = mid - m * n;
    const double d_minor =
        half * R + cross(B - A, c_minor) / (2.0 * R);
    const double d_major =
        (kPi - half) * R + cross(B - A, c_major) / (2.0 * R);
    return {d_minor, d_major};
}

double point_distance(double R, Vec2 A, Vec2 B) {
    if (norm(B - A) == 0.0) return 0.0;
    const auto [d1, d2] = point_distance_both(R, A, B);
    return std::min(d1, d2);
}

double finsler_length_closed(const OrientedCurve& gamma, double R) {
    return polyline_length(gamma) - polyline_signed_area(gamma) / R;
}

double finsler_length_closed(const ParametricCurve& gamma, double R,
                             const Tolerances& tol) {
    return curve_length(gamma, tol) - curve_signed_area(gamma, tol) / R;
}

namespace {

// Coorienting normal from a unit tangent: n = (T2, -T1), so that (n, T) is
// positively oriented. For counterclockwise curves this is the outward side.
Vec2 coorient(Vec2 unit_tangent) { return {unit_tangent.y, -unit_tangent.x}; }

}  // namespace

OrientedCurve wave_front(const OrientedCurve& gamma, double t) {
    OrientedCurve out;
    out.closed = gamma.closed;
    const std::size_t n = gamma.vertices.size();
    out.vertices.reserve(n);
    const bool have_headings = gamma.headings.size() == n;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 tangent;
        if (have_headings) {
            tangent = unit_vector(gamma.headings[i]);
        } else {
            const Vec2 prev = gamma.vertices[(i + n - 1) % n];
            const Vec2 next = gamma.vertices[(i + 1) % n];
            tangent = normalized(next - prev);
        }
        out.vertices.push_back(gamma.vertices[i] + t * coorient(tangent));
    }
    // Tangent directions of a parallel curve agree up to cusp sign flips;
    // headings are propagated for fronts that stay immersed.
    out.headings = gamma.headings;
    return out;
}

ParametricCurve wave_front(const ParametricCurve& gamma, double t) {
    if (!gamma.acceleration)
        throw std::invalid_argument(
            "wave_front: parametric curve needs an acceleration evaluator");
    ParametricCurve out;
    out.point = [gamma, t](double th) {
        return gamma.point(th) + t * coorient(normalized(gamma.velocity(th)));
    };
    out.velocity = [gamma, t](double th) {
        const Vec2 v = gamma.velocity(th);
        const Vec2 a = gamma.acceleration(th);
        const double sp = norm(v);
        // d/dth of v/|v|: (a |v|^2 - v (v.a)) / |v|^3
        const Vec2 t_dot = (norm2(v) * a - dot(v, a) * v) / (sp * sp * sp);
        return v + t * coorient(t_dot);
    };
    return out;
}

double length_via_front(const OrientedCurve& gamma, double R) {
    const OrientedCurve front = wave_front(gamma, -R);
    const double w = polyline_turning_number(gamma);
    return (kPi * R * R * w - polyline_signed_area(front)) / R;
}

double length_via_front(const ParametricCurve& gamma, double R,
                        const Tolerances& tol) {
    const ParametricCurve front = wave_front(gamma, -R);
    const double w = curve_turning_number(gamma, tol);
    return (kPi * R * R * w - curve_signed_area(front, tol)) / R;
}

StringLoop string_loop(Vec2 O, double rho, double R, Vec2 X) {
    if (!(rho > 0.0) || !(rho < R))
        throw std::invalid_argument("string_loop: need 0 < rho < R");
    const double d = norm(X - O);
    if (d <= rho)
        throw std::invalid_argument("string_loop: X must be strictly outside the obstacle");
    if (d >= 2.0 * R - rho)
        throw UnreachablePointsError(
            "string_loop: X too far for an internally tangent R-arc (|XO| >= 2R - rho)");

    const double chi = heading(X - O);
    const double cpsi =
        ((R - rho) * (R - rho) + d * d - R * R) / (2.0 * d * (R - rho));
    const double psi = std::acos(std::clamp(cpsi, -1.0, 1.0));

    StringLoop loop;
    loop.center_out = O + (R - rho) * unit_vector(chi - psi);
    loop.center_in = O + (R - rho) * unit_vector(chi + psi);
    loop.touch_out = O - rho * unit_vector(chi - psi);
    loop.touch_in = O - rho * unit_vector(chi + psi);
    loop.launch_heading = heading(X - loop.center_out) + kPi / 2.0;

    // Outgoing R-arc X -> touch_out around center_out.
    const double s1 = reduce_2pi(heading(loop.touch_out - loop.center_out) -
                                 heading(X - loop.center_out));
    const double len1 =
        0.5 * s1 * R + cross(loop.touch_out - X, loop.center_out) / (2.0 * R);
    // Obstacle arc touch_out -> touch_in, counterclockwise around O.
    const double so = reduce_2pi(2.0 * psi);
    const double len_o = rho * so + (cross(loop.touch_in - loop.touch_out, O) -
                                     rho * rho * so) / (2.0 * R);
    // Return R-arc touch_in -> X around center_in.
    const double s2 = reduce_2pi(heading(X - loop.center_in) -
                                 heading(loop.touch_in - loop.center_in));
    const double len2 =
        0.5 * s2 * R + cross(X - loop.touch_in, loop.center_in) / (2.0 * R);

    loop.length = len1 + len_o + len2;
    return loop;
}

double string_function(Vec2 O, double rho, double R, Vec2 X) {
    return string_loop(O, rho, R, X).length;
}

OrientedCurve string_level_set(Vec2 O, double rho, double R, double c,
                               int n_samples) {
    OrientedCurve out;
    out.closed = true;
    out.vertices.reserve(n_samples);
    const double lo = rho * (1.0 + 1e-9);
    const double hi = (2.0 * R - rho) * (1.0 - 1e-9);
    for (int i = 0; i < n_samples; ++i) {
        const double th = kTwoPi * i / n_samples;
        auto fd = [&](double d) {
            return string_function(O, rho, R, O + d * unit_vector(th)) - c;
        };
        if (fd(lo) > 0.0 || fd(hi) < 0.0)
            throw std::invalid_argument(
                "string_level_set: level not bracketed along a ray; choose c in range");
        const double d = bisect(fd, lo, hi, 1e-13);
        out.vertices.push_back(O + d * unit_vector(th));
    }
    return out;
}

double ellipse_sum_distance(Vec2 A, Vec2 B, double R, Vec2 X) {
    const double margin = 2.0 * R * (1.0 - 1e-9);
    if (norm(X - A) >= margin || norm(X - B) >= margin) return 1e18;
    return point_distance(R, A, X) + point_distance(R, X, B);
}

OrientedCurve magnetic_ellipse(Vec2 A, Vec2 B, double c, double R, int grid) {
    const double reach = std::min(c, 2.0 * R) * 1.05;
    Rect box;
    box.lo = {std::min(A.x, B.x) - reach, std::min(A.y, B.y) - reach};
    box.hi = {std::max(A.x, B.x) + reach, std::max(A.y, B.y) + reach};

    auto f = [A, B, R](Vec2 x) { return ellipse_sum_distance(A, B, R, x); };
    auto loops = extract_level_set(f, c, box, grid, grid, 1e-10);
    if (loops.empty()) return OrientedCurve{{}, true, {}};

    // Keep the loop of largest enclosed area.
    std::size_t best = 0;
    double best_area = -1.0;
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const double a = std::abs(polyline_signed_area(loops[i]));
        if (a > best_area) {
            best_area = a;
            best = i;
        }
    }
    return loops[best];
}

}  // namespace magbill
