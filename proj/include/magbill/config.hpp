#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "magbill/errors.hpp"
#include "magbill/metrics.hpp"
#include "magbill/numerics.hpp"
#include "magbill/pompeiu.hpp"

namespace magbill {

struct DomainRect {
    double xmin = -2.0, xmax = 2.0, ymin = -2.0, ymax = 2.0;
};

struct ExperimentConfig {
    nlohmann::json metric;   // raw metric spec (see README for the schema)
    DomainRect domain;
    Tolerances tol;
    std::string experiment;  // geodesic | reflect | billiard | string | ellipse | density | verify-all
    nlohmann::json experiment_params;
    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    bool verbose = false;
};

/// Parse and validate the top-level config document. Throws ConfigError on
/// schema violations and non-positive tolerances.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::string& path);

/// Runtime metric assembled from a metric spec, with the underlying family
/// objects where the experiments need them.
struct MetricBundle {
    std::string kind;
    PlanarMetric metric;
    std::optional<CircleMetric> circle;
    std::optional<MagneticMetric> magnetic;
    std::optional<ProjectiveMetric> projective;
    double R = 0.0;
};

MetricBundle build_metric(const nlohmann::json& spec, const Tolerances& tol);

/// Density block of a circle_lagrangian metric spec: either
/// {"constant": v} or an inline exotic spec document.
ExoticDensitySpec parse_density_spec(const nlohmann::json& d, double R);

}  // namespace magbill
