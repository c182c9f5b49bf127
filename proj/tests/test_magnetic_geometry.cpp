#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "magbill/magnetic_geometry.hpp"
#include "magbill/metrics.hpp"

using namespace magbill;

namespace {

const Tolerances kTol{};

// Constant-field Lagrangian line integral along a counterclockwise R-arc,
// by adaptive quadrature: the independent oracle for the closed form.
double arc_length_by_quadrature(double R, const ArcSpec& arc) {
    const MagneticMetric m = MagneticMetric::constant(R);
    auto f = [&](double phi) {
        const Vec2 x = arc.center + arc.R * unit_vector(phi);
        const Vec2 v = arc.R * rot90(unit_vector(phi));  // d x / d phi
        return magnetic_lagrangian_eval(m, x, v);
    };
    return quad_1d(f, arc.start, arc.start + arc.sweep, kTol);
}

}  // namespace

TEST_CASE("arc_distance closed forms") {
    CHECK(arc_distance(1.0, {{0, 0}, 1.0, 0.3, kPi}) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-14));
    // C=(0,1), A=(1,1), B=(-1,1), sweep pi -> pi/2 - 1
    CHECK(arc_distance(1.0, {{0, 1}, 1.0, 0.0, kPi}) ==
          doctest::Approx(kPi / 2.0 - 1.0).epsilon(1e-14));
    // full circle: pi R independent of center
    CHECK(arc_distance(1.0, {{3, -2}, 1.0, 1.1, kTwoPi}) ==
          doctest::Approx(kPi).epsilon(1e-13));
}

TEST_CASE("arc_distance against quadrature on random arcs") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dc(-2.0, 2.0);
    std::uniform_real_distribution<double> ds(0.1, kTwoPi);
    std::uniform_real_distribution<double> d0(0.0, kTwoPi);
    for (int i = 0; i < 50; ++i) {
        const ArcSpec arc{{dc(rng), dc(rng)}, 1.0, d0(rng), ds(rng)};
        CHECK(std::abs(arc_distance(1.0, arc) - arc_length_by_quadrature(1.0, arc)) <
              1e-10);
    }
}

TEST_CASE("arc_distance additivity along one geodesic arc") {
    const Vec2 C{0.4, -1.2};
    const double s0 = 0.7, s1 = 1.9, s2 = 2.6;  // A at s0, B at s0+s1, C at s0+s1+s2
    const double whole = arc_distance(1.0, {C, 1.0, s0, s1 + s2});
    const double first = arc_distance(1.0, {C, 1.0, s0, s1});
    const double second = arc_distance(1.0, {C, 1.0, s0 + s1, s2});
    CHECK(whole == doctest::Approx(first + second).epsilon(1e-12));
}

TEST_CASE("point_distance") {
    SUBCASE("coincident points") { CHECK(point_distance(1.0, {0.3, 1}, {0.3, 1}) == 0.0); }
    SUBCASE("unreachable") {
        CHECK_THROWS_AS((void)point_distance(1.0, {0, 0}, {2.5, 0}),
                        UnreachablePointsError);
    }
    SUBCASE("antipodal limit") {
        const Vec2 A{-1.0, 0.5}, B{1.0, 0.5};  // |AB| = 2R
        const auto [d1, d2] = point_distance_both(1.0, A, B);
        const Vec2 C = 0.5 * (A + B);
        const double expect = kPi / 2.0 + cross(B - A, C) / 2.0;
        CHECK(d1 == doctest::Approx(expect).epsilon(1e-9));
        CHECK(d2 == doctest::Approx(expect).epsilon(1e-9));
    }
    SUBCASE("asymmetry") {
        const Vec2 A{0.2, -0.1}, B{0.9, 0.4};
        CHECK(std::abs(point_distance(1.0, A, B) - point_distance(1.0, B, A)) > 1e-3);
    }
    SUBCASE("triangle inequality on random triples") {
        std::mt19937_64 rng(55);
        std::uniform_real_distribution<double> d(-0.6, 0.6);
        for (int i = 0; i < 40; ++i) {
            const Vec2 A{d(rng), d(rng)}, B{d(rng), d(rng)}, C{d(rng), d(rng)};
            const double ab = point_distance(1.0, A, B);
            const double bc = point_distance(1.0, B, C);
            const double ac = point_distance(1.0, A, C);
            CHECK(ac <= ab + bc + 1e-12);
        }
    }
    SUBCASE("minor arc value matches the direct arc formula") {
        const Vec2 A{0.1, 0.0}, B{0.8, 0.3};
        const double chord = norm(B - A);
        const double half = std::asin(chord / 2.0);
        const Vec2 n = rot90(B - A) / chord;
        const Vec2 C = 0.5 * (A + B) + std::sqrt(1.0 - chord * chord / 4.0) * n;
        const ArcSpec arc{C, 1.0, heading(A - C), 2.0 * half};
        CHECK(point_distance_both(1.0, A, B).first ==
              doctest::Approx(arc_distance(1.0, arc)).epsilon(1e-12));
    }
}

TEST_CASE("finsler_length_closed closed forms") {
    CHECK(finsler_length_closed(make_circle({0, 0}, 1.0, true), 1.0, kTol) ==
          doctest::Approx(kPi).epsilon(1e-10));
    CHECK(finsler_length_closed(make_circle({2, 1}, 1.0, false), 1.0, kTol) ==
          doctest::Approx(3.0 * kPi).epsilon(1e-10));
    OrientedCurve point;
    point.vertices = {{0.7, -0.3}};
    CHECK(finsler_length_closed(point, 1.0) == 0.0);
}

TEST_CASE("finsler length equals Lagrangian quadrature on random smooth curves") {
    const MagneticMetric m = MagneticMetric::constant(1.0);
    for (int k = 0; k < 10; ++k) {
        const auto curve = support_form_curve(random_convex_support(900 + k));
        auto f = [&](double th) {
            return magnetic_lagrangian_eval(m, curve.point(th), curve.velocity(th));
        };
        const double direct = quad_1d(f, 0.0, kTwoPi, kTol);
        CHECK(std::abs(direct - finsler_length_closed(curve, 1.0, kTol)) < 1e-8);
    }
}

TEST_CASE("wave fronts") {
    SUBCASE("circle grows by t") {
        const auto front = wave_front(make_circle({0.5, -0.2}, 1.2, true), 0.7);
        for (double th : {0.0, 1.0, 2.5, 5.0})
            CHECK(norm(front.point(th) - Vec2{0.5, -0.2}) ==
                  doctest::Approx(1.9).epsilon(1e-13));
    }
    SUBCASE("t = 0 is the identity") {
        const auto curve = make_ellipse({0, 0}, 1.0, 0.5);
        const auto front = wave_front(curve, 0.0);
        for (double th : {0.3, 2.0, 4.4})
            CHECK(norm(front.point(th) - curve.point(th)) < 1e-15);
    }
    SUBCASE("polyline circle with stored headings grows by t") {
        const auto poly = sample_curve(make_circle({0, 0}, 1.0, true), 256);
        const auto front = wave_front(poly, 0.25);
        for (const Vec2& v : front.vertices)
            CHECK(norm(v) == doctest::Approx(1.25).epsilon(1e-13));
    }
    SUBCASE("area law S(front) = S + t l + pi t^2 on an ellipse") {
        const auto curve = make_ellipse({0.3, 0.1}, 1.0, 0.5);
        const double S = curve_signed_area(curve, kTol);
        const double l = curve_length(curve, kTol);
        for (double t : {0.3, 1.0, -0.2}) {
            const double Sf = curve_signed_area(wave_front(curve, t), kTol);
            CHECK(std::abs(Sf - (S + t * l + kPi * t * t)) < 1e-6);
        }
    }
}

TEST_CASE("length_via_front agrees with the line-integral length") {
    SUBCASE("3:1 ellipse") {
        const auto curve = make_ellipse({0.2, -0.4}, 1.2, 0.4);
        CHECK(std::abs(length_via_front(curve, 1.0, kTol) -
                       finsler_length_closed(curve, 1.0, kTol)) < 1e-8);
    }
    SUBCASE("ccw R-circle: front degenerates to the center") {
        const auto curve = make_circle({0.8, 0.1}, 1.0, true);
        CHECK(length_via_front(curve, 1.0, kTol) == doctest::Approx(kPi).epsilon(1e-9));
    }
    SUBCASE("cw unit circle bookkeeping gives 3 pi") {
        const auto curve = make_circle({0, 0}, 1.0, false);
        // Gamma(-R) is the radius-2 circle, orientation reversed: S = -4pi,
        // and the winding factor w = -1 must make the total 3 pi.
        CHECK(length_via_front(curve, 1.0, kTol) ==
              doctest::Approx(3.0 * kPi).epsilon(1e-9));
        CHECK(finsler_length_closed(curve, 1.0, kTol) ==
              doctest::Approx(3.0 * kPi).epsilon(1e-10));
    }
    SUBCASE("polyline route on a convex curve") {
        const auto curve = support_form_curve(random_convex_support(77));
        const auto poly = sample_curve(curve, 16384);
        CHECK(std::abs(length_via_front(poly, 1.0) - finsler_length_closed(poly, 1.0)) <
              1e-6);
    }
}

TEST_CASE("string function") {
    const Vec2 O{0.0, 0.0};
    const double rho = 0.3, R = 1.0;

    SUBCASE("rotational symmetry") {
        const double d = 0.9;
        const double ref = string_function(O, rho, R, {d, 0.0});
        for (int i = 1; i < 12; ++i) {
            const double th = kTwoPi * i / 12.0;
            CHECK(string_function(O, rho, R, d * unit_vector(th)) ==
                  doctest::Approx(ref).epsilon(1e-9));
        }
    }
    SUBCASE("loop length equals the polyline Finsler length") {
        const Vec2 X{0.8, 0.0};
        const StringLoop loop = string_loop(O, rho, R, X);
        // Assemble the loop densely and use l - S/R, exact for polylines.
        OrientedCurve poly;
        poly.closed = true;
        const int n = 6000;
        const double s1 = reduce_2pi(heading(loop.touch_out - loop.center_out) -
                                     heading(X - loop.center_out));
        for (int i = 0; i < n; ++i)
            poly.vertices.push_back(
                loop.center_out +
                R * unit_vector(heading(X - loop.center_out) + s1 * i / n));
        const double so = reduce_2pi(heading(loop.touch_in - O) -
                                     heading(loop.touch_out - O));
        for (int i = 0; i < n; ++i)
            poly.vertices.push_back(
                O + rho * unit_vector(heading(loop.touch_out - O) + so * i / n));
        const double s2 = reduce_2pi(heading(X - loop.center_in) -
                                     heading(loop.touch_in - loop.center_in));
        for (int i = 0; i < n; ++i)
            poly.vertices.push_back(
                loop.center_in +
                R * unit_vector(heading(loop.touch_in - loop.center_in) + s2 * i / n));
        CHECK(finsler_length_closed(poly, R) ==
              doctest::Approx(loop.length).epsilon(1e-6));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS((void)string_function(O, rho, R, {0.1, 0.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)string_function(O, 1.2, R, {2.0, 0.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)string_function(O, rho, R, {1.8, 0.0}),
                        UnreachablePointsError);
    }
    SUBCASE("level set is a smooth closed convex curve around the obstacle") {
        const auto level = string_level_set(O, rho, R, 2.4, 512);
        CHECK(is_convex_ccw(level));
        for (const Vec2& v : level.vertices) CHECK(norm(v - O) > rho);
        // All samples on the level: re-evaluate F
        for (int i = 0; i < 512; i += 37)
            CHECK(string_function(O, rho, R, level.vertices[i]) ==
                  doctest::Approx(2.4).epsilon(1e-10));
    }
}

TEST_CASE("magnetic ellipse") {
    const double R = 1.0;
    SUBCASE("A = B degenerates to a Euclidean circle") {
        const Vec2 A{0.2, -0.1};
        const auto curve = magnetic_ellipse(A, A, 1.1, R, 200);
        REQUIRE(curve.vertices.size() > 50);
        double lo = 1e300, hi = -1e300;
        for (const Vec2& v : curve.vertices) {
            lo = std::min(lo, norm(v - A));
            hi = std::max(hi, norm(v - A));
        }
        CHECK(hi - lo < 1e-8);
    }
    SUBCASE("foci cannot be interchanged") {
        const Vec2 A{-0.3, 0.0}, B{0.3, 0.0};
        const auto cab = magnetic_ellipse(A, B, 1.6, R, 150);
        const auto cba = magnetic_ellipse(B, A, 1.6, R, 150);
        REQUIRE(!cab.vertices.empty());
        REQUIRE(!cba.vertices.empty());
        // one-sided Hausdorff distance
        double h = 0.0;
        for (std::size_t i = 0; i < cab.vertices.size(); i += 7) {
            double nearest = 1e300;
            for (const Vec2& w : cba.vertices)
                nearest = std::min(nearest, norm(cab.vertices[i] - w));
            h = std::max(h, nearest);
        }
        CHECK(h > 1e-3);
    }
    SUBCASE("empty locus is flagged by an empty curve") {
        const Vec2 A{-0.3, 0.0}, B{0.3, 0.0};
        const double d = point_distance(R, A, B);
        const auto curve = magnetic_ellipse(A, B, 0.5 * d, R, 100);
        CHECK(curve.vertices.empty());
    }
    SUBCASE("locus points satisfy the defining equation") {
        const Vec2 A{-0.3, 0.0}, B{0.3, 0.0};
        const auto curve = magnetic_ellipse(A, B, 1.6, R, 200);
        REQUIRE(curve.vertices.size() > 50);
        for (std::size_t i = 0; i < curve.vertices.size(); i += 11) {
            const Vec2 X = curve.vertices[i];
            CHECK(point_distance(R, A, X) + point_distance(R, X, B) ==
                  doctest::Approx(1.6).epsilon(1e-8));
        }
    }
}
