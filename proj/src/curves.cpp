#include "magbill/curves.hpp"

#include <cmath>
#include <random>

namespace magbill {

namespace {

std::size_t segment_count(const OrientedCurve& c) {
    if (c.vertices.size() < 2) return 0;
    return c.closed ? c.vertices.size() : c.vertices.size() - 1;
}

}  // namespace

double polyline_length(const OrientedCurve& c) {
    double len = 0.0;
    const std::size_t n = c.vertices.size();
    for (std::size_t i = 0; i < segment_count(c); ++i)
        len += norm(c.vertices[(i + 1) % n] - c.vertices[i]);
    return len;
}

double polyline_signed_area(const OrientedCurve& c) {
    double twice = 0.0;
    const std::size_t n = c.vertices.size();
    for (std::size_t i = 0; i < segment_count(c); ++i)
        twice += cross(c.vertices[i], c.vertices[(i + 1) % n]);
    return 0.5 * twice;
}

double polyline_turning_number(const OrientedCurve& c) {
    const std::size_t n = c.vertices.size();
    if (!c.closed || n < 3) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = c.vertices[(i + 1) % n] - c.vertices[i];
        const Vec2 e1 = c.vertices[(i + 2) % n] - c.vertices[(i + 1) % n];
        total += std::atan2(cross(e0, e1), dot(e0, e1));
    }
    return total / kTwoPi;
}

bool is_convex_ccw(const OrientedCurve& c) {
    const std::size_t n = c.vertices.size();
    if (!c.closed || n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = c.vertices[(i + 1) % n] - c.vertices[i];
        const Vec2 e1 = c.vertices[(i + 2) % n] - c.vertices[(i + 1) % n];
        if (cross(e0, e1) < -1e-12 * (norm(e0) * norm(e1))) return false;
    }
    return std::abs(polyline_turning_number(c) - 1.0) < 0.5;
}

double curve_length(const ParametricCurve& c, const Tolerances& tol) {
    return quad_1d([&c](double t) { return norm(c.velocity(t)); }, 0.0, kTwoPi, tol);
}

double curve_signed_area(const ParametricCurve& c, const Tolerances& tol) {
    return quad_1d(
        [&c](double t) { return 0.5 * cross(c.point(t), c.velocity(t)); }, 0.0,
        kTwoPi, tol);
}

double curve_turning_number(const ParametricCurve& c, const Tolerances& tol) {
    return quad_1d(
               [&c](double t) {
                   const Vec2 v = c.velocity(t);
                   const Vec2 a = c.acceleration(t);
                   return cross(v, a) / norm2(v);
               },
               0.0, kTwoPi, tol) /
           kTwoPi;
}

OrientedCurve sample_curve(const ParametricCurve& c, int n) {
    OrientedCurve out;
    out.closed = true;
    out.vertices.reserve(n);
    out.headings.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double t = kTwoPi * i / n;
        out.vertices.push_back(c.point(t));
        out.headings.push_back(heading(c.velocity(t)));
    }
    return out;
}

ParametricCurve make_circle(Vec2 center, double r, bool ccw) {
    const double s = ccw ? 1.0 : -1.0;
    ParametricCurve c;
    c.point = [=](double t) { return center + r * unit_vector(s * t); };
    c.velocity = [=](double t) { return s * r * rot90(unit_vector(s * t)); };
    c.acceleration = [=](double t) { return -r * unit_vector(s * t); };
    return c;
}

ParametricCurve make_ellipse(Vec2 center, double a, double b) {
    ParametricCurve c;
    c.point = [=](double t) {
        return Vec2{center.x + a * std::cos(t), center.y + b * std::sin(t)};
    };
    c.velocity = [=](double t) { return Vec2{-a * std::sin(t), b * std::cos(t)}; };
    c.acceleration = [=](double t) {
        return Vec2{-a * std::cos(t), -b * std::sin(t)};
    };
    return c;
}

namespace {

struct SupportEval {
    double h, h1, h2, h3;  // h and first three derivatives at theta
};

SupportEval eval_support(const SupportCoeffs& sc, double t) {
    SupportEval e{sc.c0, 0.0, 0.0, 0.0};
    for (std::size_t k = 1; k <= sc.cos_k.size() || k <= sc.sin_k.size(); ++k) {
        const double ck = k <= sc.cos_k.size() ? sc.cos_k[k - 1] : 0.0;
        const double sk = k <= sc.sin_k.size() ? sc.sin_k[k - 1] : 0.0;
        const double c = std::cos(k * t), s = std::sin(k * t);
        const double kk = static_cast<double>(k);
        e.h += ck * c + sk * s;
        e.h1 += kk * (-ck * s + sk * c);
        e.h2 += kk * kk * (-ck * c - sk * s);
        e.h3 += kk * kk * kk * (ck * s - sk * c);
    }
    return e;
}

}  // namespace

ParametricCurve support_form_curve(const SupportCoeffs& h) {
    for (int i = 0; i < 2048; ++i) {
        const auto e = eval_support(h, kTwoPi * i / 2048.0);
        if (!(e.h + e.h2 > 0.0))
            throw std::invalid_argument(
                "support_form_curve: h + h'' must be positive (curve not convex)");
    }
    ParametricCurve c;
    c.point = [h](double t) {
        const auto e = eval_support(h, t);
        return e.h * unit_vector(t) + e.h1 * rot90(unit_vector(t));
    };
    c.velocity = [h](double t) {
        const auto e = eval_support(h, t);
        return (e.h + e.h2) * rot90(unit_vector(t));
    };
    c.acceleration = [h](double t) {
        const auto e = eval_support(h, t);
        return (e.h1 + e.h3) * rot90(unit_vector(t)) - (e.h + e.h2) * unit_vector(t);
    };
    return c;
}

SupportCoeffs random_convex_support(std::uint64_t seed, int max_harmonic,
                                    double amplitude, double floor) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    SupportCoeffs sc;
    sc.c0 = 1.0;
    for (int k = 1; k <= max_harmonic; ++k) {
        // Damp high harmonics: h + h'' picks up a k^2 factor.
        sc.cos_k.push_back(dist(rng) / (1.0 + k * k));
        sc.sin_k.push_back(dist(rng) / (1.0 + k * k));
    }
    for (;;) {
        double min_f = 1e300;
        for (int i = 0; i < 2048; ++i) {
            const auto e = eval_support(sc, kTwoPi * i / 2048.0);
            min_f = std::min(min_f, e.h + e.h2);
        }
        if (min_f >= floor) break;
        for (auto& v : sc.cos_k) v *= 0.7;
        for (auto& v : sc.sin_k) v *= 0.7;
    }
    return sc;
}

}  // namespace magbill
