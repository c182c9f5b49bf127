#pragma once

#include <functional>
#include <vector>

#include "magbill/curves.hpp"
#include "magbill/vec2.hpp"

namespace magbill {

struct Rect {
    Vec2 lo;
    Vec2 hi;
};

/// Marching-squares contour extraction for {f = level}. Edge crossings are
/// refined by bisection along grid edges to refine_tol in position. Loops are
/// oriented with {f < level} on the left (counterclockwise around sublevel
/// regions). Grid corners where f returns a non-finite or huge sentinel value
/// (>= 1e17) poison their cells, which are skipped; open chains that leave
/// the box or touch poisoned cells are discarded.
std::vector<OrientedCurve> extract_level_set(const std::function<double(Vec2)>& f,
                                             double level, const Rect& box,
                                             int nx, int ny,
                                             double refine_tol = 1e-10);

}  // namespace magbill
