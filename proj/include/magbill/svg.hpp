#pragma once

#include <string>
#include <utility>
#include <vector>

#include "magbill/curves.hpp"

namespace magbill {

struct SvgStyle {
    std::string stroke = "#1f77b4";
    double stroke_width = 0.01;
};

/// Deterministic SVG: viewBox from the joint bounding box plus a 5% margin,
/// one path element per curve, byte-identical across runs for identical
/// input. Throws std::invalid_argument on an empty curve list.
void emit_svg(const std::vector<std::pair<OrientedCurve, SvgStyle>>& curves,
              const std::string& path);

}  // namespace magbill
