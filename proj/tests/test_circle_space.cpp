#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "magbill/circle_space.hpp"
#include "magbill/magnetic_geometry.hpp"
#include "magbill/pompeiu.hpp"

using namespace magbill;

namespace {

const Tolerances kTol{};

ExoticDensitySpec single_wave_spec() {
    ExoticDensitySpec spec;
    spec.R = 1.0;
    spec.offset = 1.0;
    ExoticTerm t;
    t.root_index = 1;
    t.weight = 0.5;
    t.atoms = {{0.0, 1.0}};
    spec.terms = {t};
    return spec;
}

}  // namespace

TEST_CASE("omega_area closed forms") {
    CircleSpaceForm form{1.0, constant_field(1.0)};
    SUBCASE("ccw circle of centers") {
        CHECK(omega_area(form, make_circle({0.4, -0.3}, 0.8, true), kTol) ==
              doctest::Approx(-kPi * 0.64).epsilon(1e-10));
    }
    SUBCASE("orientation reversal flips the sign") {
        const double ccw = omega_area(form, make_circle({1, 2}, 0.5, true), kTol);
        const double cw = omega_area(form, make_circle({1, 2}, 0.5, false), kTol);
        CHECK(ccw == doctest::Approx(-cw).epsilon(1e-12));
    }
    SUBCASE("exotic density over an R-disc of centers gives -pi R") {
        CircleSpaceForm ex{1.0, exotic_density(single_wave_spec())};
        for (const Vec2 c : {Vec2{0, 0}, Vec2{1.3, -0.7}})
            CHECK(omega_area(ex, make_circle(c, 1.0, true), kTol) ==
                  doctest::Approx(-kPi).epsilon(1e-8));
    }
    SUBCASE("inner-quadrature fallback matches the closed-form potential") {
        ScalarField g = exotic_density(single_wave_spec());
        ScalarField stripped = g;
        stripped.antideriv_x1 = nullptr;
        CircleSpaceForm with{1.0, g}, without{1.0, stripped};
        const auto boundary = make_ellipse({0.5, -0.2}, 0.9, 0.6);
        CHECK(omega_area(with, boundary, kTol) ==
              doctest::Approx(omega_area(without, boundary, kTol)).epsilon(1e-9));
    }
    SUBCASE("polyline route: additive over adjacent squares") {
        auto square = [](Vec2 lo, Vec2 hi) {
            OrientedCurve c;
            c.closed = true;
            c.vertices = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
            return c;
        };
        CircleSpaceForm ex{1.0, exotic_density(single_wave_spec())};
        const double left = omega_area(ex, square({0, 0}, {1, 1}), kTol);
        const double right = omega_area(ex, square({1, 0}, {2, 1}), kTol);
        const double both = omega_area(ex, square({0, 0}, {2, 1}), kTol);
        CHECK(left + right == doctest::Approx(both).epsilon(1e-10));
    }
}

TEST_CASE("disc_integral") {
    SUBCASE("constant density") {
        CHECK(disc_integral(constant_field(2.5), {3, -1}, 1.2) ==
              doctest::Approx(2.5 * kPi * 1.44).epsilon(1e-12));
    }
    SUBCASE("exotic density: constant over 100 random centers") {
        const ScalarField g = exotic_density(single_wave_spec());
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> d(-2.0, 2.0);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < 100; ++i) {
            const double v = disc_integral(g, {d(rng), d(rng)}, 1.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK((hi - lo) / hi < 1e-8);
        CHECK(hi == doctest::Approx(kPi).epsilon(1e-10));  // offset term only
    }
    SUBCASE("g = x1 scales with the center abscissa") {
        const ScalarField g = coordinate_field_x1();
        for (double cx : {-1.0, 0.3, 2.0})
            CHECK(disc_integral(g, {cx, 0.7}, 1.0) ==
                  doctest::Approx(kPi * cx).epsilon(1e-12));
    }
    SUBCASE("trigonometric measures and mixed roots are also invariant") {
        ExoticDensitySpec trig;
        trig.R = 1.0;
        trig.offset = 3.0;
        ExoticTerm t;
        t.root_index = 1;
        t.weight = 0.3;
        t.trig = TrigMeasure{0.2, {0.1, 0.05}, {0.07}};
        trig.terms = {t};

        ExoticDensitySpec mixed;
        mixed.R = 1.0;
        mixed.offset = 1.0;
        ExoticTerm t1;
        t1.root_index = 1;
        t1.weight = 0.3;
        t1.atoms = {{kPi / 6.0, 1.0}};
        ExoticTerm t2;
        t2.root_index = 2;
        t2.weight = 0.2;
        t2.phase = PhaseKind::kSine;
        t2.atoms = {{1.1, 1.0}};
        mixed.terms = {t1, t2};

        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> d(-2.0, 2.0);
        for (const auto& spec : {trig, mixed}) {
            const ScalarField g = exotic_density(spec);
            double lo = 1e300, hi = -1e300;
            for (int i = 0; i < 25; ++i) {
                const double v = disc_integral(g, {d(rng), d(rng)}, 1.0);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            CHECK((hi - lo) / hi < 1e-8);
        }
    }
}

TEST_CASE("circle_orthogonality") {
    SUBCASE("constant") {
        const auto [mc, ms] = circle_orthogonality(constant_field(1.0), {0.4, 2}, 1.0, kTol);
        CHECK(std::abs(mc) < 1e-12);
        CHECK(std::abs(ms) < 1e-12);
    }
    SUBCASE("exotic") {
        const ScalarField g = exotic_density(single_wave_spec());
        std::mt19937_64 rng(71);
        std::uniform_real_distribution<double> d(-2.0, 2.0);
        for (int i = 0; i < 20; ++i) {
            const auto [mc, ms] = circle_orthogonality(g, {d(rng), d(rng)}, 1.0, kTol);
            CHECK(std::abs(mc) < 1e-9);
            CHECK(std::abs(ms) < 1e-9);
        }
    }
    SUBCASE("g = x1 gives (pi R, 0)") {
        const auto [mc, ms] = circle_orthogonality(coordinate_field_x1(), {0.6, -0.8}, 1.0, kTol);
        CHECK(mc == doctest::Approx(kPi).epsilon(1e-10));
        CHECK(std::abs(ms) < 1e-10);
    }
}

TEST_CASE("constancy of disc integrals iff circle orthogonality") {
    // Positive control: both hold. Negative control: both fail.
    const ScalarField good = exotic_density(single_wave_spec());
    const ScalarField bad = coordinate_field_x1();
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    double good_orth = 0.0, bad_orth = 0.0;
    double good_spread = 0.0, bad_spread = 0.0;
    double g_lo = 1e300, g_hi = -1e300, b_lo = 1e300, b_hi = -1e300;
    for (int i = 0; i < 15; ++i) {
        const Vec2 c{d(rng), d(rng)};
        const auto [gc, gs] = circle_orthogonality(good, c, 1.0, kTol);
        const auto [bc, bs] = circle_orthogonality(bad, c, 1.0, kTol);
        good_orth = std::max({good_orth, std::abs(gc), std::abs(gs)});
        bad_orth = std::max({bad_orth, std::abs(bc), std::abs(bs)});
        const double gv = disc_integral(good, c, 1.0);
        const double bv = disc_integral(bad, c, 1.0);
        g_lo = std::min(g_lo, gv);
        g_hi = std::max(g_hi, gv);
        b_lo = std::min(b_lo, bv);
        b_hi = std::max(b_hi, bv);
    }
    good_spread = g_hi - g_lo;
    bad_spread = b_hi - b_lo;
    CHECK(good_orth < 1e-9);
    CHECK(good_spread < 1e-8);
    CHECK(bad_orth > 1.0);
    CHECK(bad_spread > 1.0);
}

TEST_CASE("circle length constancy") {
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<Vec2> centers;
    for (int i = 0; i < 12; ++i) centers.push_back({d(rng), d(rng)});

    SUBCASE("g = 1: all lengths are pi R") {
        CircleMetric c;
        c.R = 1.0;
        c.g = constant_field(1.0);
        c.gauge = canonical_gauge(c.g, c.R, kTol);
        const auto rep = circle_length_constancy(c, centers, kTol);
        for (double len : rep.lengths) CHECK(len == doctest::Approx(kPi).epsilon(1e-10));
        CHECK(rep.max_spread < 1e-10);
    }
    SUBCASE("exotic: constant to 1e-8") {
        const auto built = make_circle_metric(single_wave_spec(), kTol);
        const auto rep = circle_length_constancy(built.metric, centers, kTol);
        CHECK(rep.max_spread < 1e-8);
    }
    SUBCASE("g = x1: spread of order one") {
        CircleMetric c;
        c.R = 1.0;
        c.g = coordinate_field_x1();
        c.gauge = canonical_gauge(c.g, c.R, kTol);
        const auto rep = circle_length_constancy(c, centers, kTol);
        CHECK(rep.max_spread > 0.5);
    }
}

TEST_CASE("length-area identity") {
    SUBCASE("constant density on a 2:1 ellipse") {
        CircleMetric c;
        c.R = 1.0;
        c.g = constant_field(1.0);
        c.gauge = canonical_gauge(c.g, c.R, kTol);
        const auto curve = make_ellipse({0.2, 0.1}, 1.0, 0.5);
        const auto [lhs, rhs] = length_area_check(c, curve, kTol);
        CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(lhs)));
        // With g = 1 the identity reduces to the front-area length formula.
        CHECK(lhs == doctest::Approx(finsler_length_closed(curve, 1.0, kTol))
                         .epsilon(1e-8));
    }
    SUBCASE("exotic density on a convex curve") {
        const auto built = make_circle_metric(single_wave_spec(), kTol);
        const auto curve = support_form_curve(random_convex_support(4242));
        const auto [lhs, rhs] = length_area_check(built.metric, curve, kTol);
        CHECK(std::abs(lhs - rhs) < 1e-6 * (1.0 + std::abs(lhs)));
    }
    SUBCASE("degenerate curve: omega-area of an R-disc equals -C") {
        const auto built = make_circle_metric(single_wave_spec(), kTol);
        const CircleSpaceForm form{built.metric.R, built.metric.g};
        const Vec2 o{0.7, -0.2};
        const double C = circle_finsler_length(built.metric, o, kTol);
        CHECK(omega_area(form, make_circle(o, built.metric.R, true), kTol) ==
              doctest::Approx(-C).epsilon(1e-8));
    }
}
