#pragma once

#include <optional>
#include <vector>

#include "magbill/fields.hpp"
#include "magbill/metrics.hpp"

namespace magbill {

/// One oscillatory building block: a plane-wave profile cos or sin of
/// (a/R)(x1 cos b + x2 sin b) averaged over an angular measure, where a is a
/// root of J1. Each such block integrates to zero over every disc of radius
/// R, so offset + sum of blocks has constant disc integrals.
struct AngularAtom {
    double angle = 0.0;
    double mass = 1.0;
};

struct TrigMeasure {
    double m0 = 0.0;
    std::vector<double> cos_k;
    std::vector<double> sin_k;
};

enum class PhaseKind { kCosine, kSine };

struct ExoticTerm {
    int root_index = 1;  ///< 1-based index into the positive roots of J1
    double weight = 1.0;
    PhaseKind phase = PhaseKind::kCosine;
    std::vector<AngularAtom> atoms;     ///< finite atomic measure, or ...
    std::optional<TrigMeasure> trig;    ///< ... a trigonometric polynomial density
};

struct ExoticDensitySpec {
    double R = 1.0;
    double offset = 1.0;
    std::vector<ExoticTerm> terms;
};

/// Strict positivity guard: offset must exceed the sum over terms of
/// |weight| times a modulus bound of the oscillatory part.
bool spec_is_positive(const ExoticDensitySpec& spec);

/// The density g(x) = offset + sum of terms, with analytic gradient and an
/// analytic x1-antiderivative.
ScalarField exotic_density(const ExoticDensitySpec& spec);

struct BuiltCircleMetric {
    CircleMetric metric;
    MetricValidationReport report;
};

/// CircleMetric with the canonical gauge (b = 0, a from the x2-antiderivative
/// of g at x1 + R, here in closed form) and a passed admissibility report.
/// Throws std::invalid_argument on a positivity violation and
/// DegenerateMetricError if validation fails.
BuiltCircleMetric make_circle_metric(const ExoticDensitySpec& spec,
                                     const Tolerances& tol);

}  // namespace magbill
