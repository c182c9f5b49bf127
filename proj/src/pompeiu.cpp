#include "magbill/pompeiu.hpp"

#include <cmath>

#include "magbill/numerics.hpp"

namespace magbill {

namespace {

// Int_0^X cos(A s + B) ds and Int_0^X sin(A s + B) ds, with series branches
// for small |A X| where the closed forms lose digits.
double int_cos(double A, double B, double X) {
    const double z = A * X;
    if (std::abs(z) > 1e-4)
        return (std::sin(z + B) - std::sin(B)) / A;
    const double c = std::cos(B), s = std::sin(B);
    return c * (X - A * A * X * X * X / 6.0) - s * (A * X * X / 2.0 - A * z * z * X * X / 24.0);
}

double int_sin(double A, double B, double X) {
    const double z = A * X;
    if (std::abs(z) > 1e-4)
        return (std::cos(B) - std::cos(z + B)) / A;
    const double c = std::cos(B), s = std::sin(B);
    return s * (X - A * A * X * X * X / 6.0) + c * (A * X * X / 2.0 - A * z * z * X * X / 24.0);
}

struct FlatAtom {
    double cb, sb;    // direction cosines of the wave vector
    double mass;      // weight * measure mass
    double freq;      // a/R for the term's J1 root
    bool sine;        // phase kind
};

constexpr int kTrigNodes = 512;  // trapezoid is exact at this bandwidth

std::vector<FlatAtom> flatten(const ExoticDensitySpec& spec) {
    int max_root = 1;
    for (const auto& t : spec.terms) max_root = std::max(max_root, t.root_index);
    const auto roots = bessel_j1_roots(max_root);

    std::vector<FlatAtom> flat;
    for (const auto& t : spec.terms) {
        if (t.root_index < 1) throw std::invalid_argument("root_index must be >= 1");
        const double freq = roots[t.root_index - 1] / spec.R;
        const bool sine = t.phase == PhaseKind::kSine;
        for (const auto& atom : t.atoms)
            flat.push_back({std::cos(atom.angle), std::sin(atom.angle),
                            t.weight * atom.mass, freq, sine});
        if (t.trig) {
            for (int j = 0; j < kTrigNodes; ++j) {
                const double beta = kTwoPi * j / kTrigNodes;
                double fb = t.trig->m0;
                for (std::size_t k = 1; k <= t.trig->cos_k.size(); ++k)
                    fb += t.trig->cos_k[k - 1] * std::cos(k * beta);
                for (std::size_t k = 1; k <= t.trig->sin_k.size(); ++k)
                    fb += t.trig->sin_k[k - 1] * std::sin(k * beta);
                flat.push_back({std::cos(beta), std::sin(beta),
                                t.weight * fb * kTwoPi / kTrigNodes, freq, sine});
            }
        }
    }
    return flat;
}

double term_modulus_bound(const ExoticTerm& t) {
    double bound = 0.0;
    for (const auto& atom : t.atoms) bound += std::abs(atom.mass);
    if (t.trig) {
        double sup = std::abs(t.trig->m0);
        for (double c : t.trig->cos_k) sup += std::abs(c);
        for (double s : t.trig->sin_k) sup += std::abs(s);
        bound += kTwoPi * sup;
    }
    return bound;
}

}  // namespace

bool spec_is_positive(const ExoticDensitySpec& spec) {
    double oscillation = 0.0;
    for (const auto& t : spec.terms)
        oscillation += std::abs(t.weight) * term_modulus_bound(t);
    return spec.offset > oscillation;
}

ScalarField exotic_density(const ExoticDensitySpec& spec) {
    if (!(spec.R > 0.0)) throw std::invalid_argument("exotic_density: R must be > 0");
    if (!spec_is_positive(spec))
        throw std::invalid_argument(
            "exotic_density: offset does not dominate the oscillation bound; "
            "density would not be strictly positive");

    auto flat = flatten(spec);
    const double offset = spec.offset;

    ScalarField g;
    g.value = [flat, offset](Vec2 x) {
        double v = offset;
        for (const auto& a : flat) {
            const double ph = a.freq * (x.x * a.cb + x.y * a.sb);
            v += a.mass * (a.sine ? std::sin(ph) : std::cos(ph));
        }
        return v;
    };
    g.gradient = [flat](Vec2 x) {
        Vec2 grad{0.0, 0.0};
        for (const auto& a : flat) {
            const double ph = a.freq * (x.x * a.cb + x.y * a.sb);
            const double d = a.mass * a.freq * (a.sine ? std::cos(ph) : -std::sin(ph));
            grad += d * Vec2{a.cb, a.sb};
        }
        return grad;
    };
    g.second_partials = [flat](Vec2 x) {
        SymMat2 h;
        for (const auto& a : flat) {
            const double ph = a.freq * (x.x * a.cb + x.y * a.sb);
            const double d2 =
                -a.mass * a.freq * a.freq * (a.sine ? std::sin(ph) : std::cos(ph));
            h.xx += d2 * a.cb * a.cb;
            h.xy += d2 * a.cb * a.sb;
            h.yy += d2 * a.sb * a.sb;
        }
        return h;
    };
    g.antideriv_x1 = [flat, offset](Vec2 x) {
        double v = offset * x.x;
        for (const auto& a : flat) {
            const double A = a.freq * a.cb;
            const double B = a.freq * x.y * a.sb;
            v += a.mass * (a.sine ? int_sin(A, B, x.x) : int_cos(A, B, x.x));
        }
        return v;
    };
    return g;
}

BuiltCircleMetric make_circle_metric(const ExoticDensitySpec& spec,
                                     const Tolerances& tol) {
    BuiltCircleMetric out;
    out.metric.R = spec.R;
    out.metric.g = exotic_density(spec);

    const auto flat = flatten(spec);
    const double R = spec.R;
    const double offset = spec.offset;

    // Canonical gauge a(x) = (1/R) Int_0^{x2} g(x1 + R, s) ds, in closed form.
    GaugeForm gauge;
    gauge.a.value = [flat, offset, R](Vec2 x) {
        double v = offset * x.y;
        for (const auto& a : flat) {
            const double A = a.freq * a.sb;
            const double B = a.freq * (x.x + R) * a.cb;
            v += a.mass * (a.sine ? int_sin(A, B, x.y) : int_cos(A, B, x.y));
        }
        return v / R;
    };
    {
        // Copy the density evaluator for the exact x2-derivative g(x1+R, x2)/R.
        ScalarField g_copy = out.metric.g;
        gauge.a.gradient = [flat, R, g_copy](Vec2 x) {
            double ax1 = 0.0;
            for (const auto& a : flat) {
                const double A = a.freq * a.sb;
                const double B = a.freq * (x.x + R) * a.cb;
                const double dB_dx1 = a.freq * a.cb;
                // d(int_cos)/dB = -int_sin, d(int_sin)/dB = int_cos.
                ax1 += a.mass * dB_dx1 *
                       (a.sine ? int_cos(A, B, x.y) : -int_sin(A, B, x.y));
            }
            return Vec2{ax1 / R, g_copy.value({x.x + R, x.y}) / R};
        };
    }
    gauge.b = constant_field(0.0);
    out.metric.gauge = gauge;

    out.report = validate_circle_metric(out.metric, ProbeGrid{}, tol);
    if (!out.report.passed(1e-8))
        throw DegenerateMetricError(
            "make_circle_metric: admissibility validation failed (center residual " +
            std::to_string(out.report.max_center_residual) + ", gauge residual " +
            std::to_string(out.report.max_gauge_residual) + ", min density " +
            std::to_string(out.report.min_density) + ")");
    return out;
}

}  // namespace magbill
