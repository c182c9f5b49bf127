#pragma once

#include <stdexcept>
#include <string>

namespace magbill {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a support function fails positivity where an indicatrix or a
/// geodesic denominator requires it.
struct DegenerateMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CollinearPointsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GrazingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrappedOrbitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No counterclockwise arc of the requested radius joins the two points.
struct UnreachablePointsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace magbill
