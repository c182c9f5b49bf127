#include "magbill/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "magbill/io.hpp"

namespace magbill {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void emit_svg(const std::vector<std::pair<OrientedCurve, SvgStyle>>& curves,
              const std::string& path) {
    if (curves.empty()) throw std::invalid_argument("emit_svg: no curves");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [c, style] : curves) {
        for (const Vec2& v : c.vertices) {
            xmin = std::min(xmin, v.x);
            xmax = std::max(xmax, v.x);
            ymin = std::min(ymin, v.y);
            ymax = std::max(ymax, v.y);
        }
    }
    if (!(xmin <= xmax)) throw std::invalid_argument("emit_svg: curves have no vertices");

    const double mx = 0.05 * std::max(xmax - xmin, 1e-9);
    const double my = 0.05 * std::max(ymax - ymin, 1e-9);
    xmin -= mx;
    xmax += mx;
    ymin -= my;
    ymax += my;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    out += num(xmin) + " " + num(-ymax) + " " + num(xmax - xmin) + " " +
           num(ymax - ymin) + "\">\n";
    for (const auto& [c, style] : curves) {
        if (c.vertices.empty()) continue;
        out += "  <path d=\"";
        for (std::size_t i = 0; i < c.vertices.size(); ++i) {
            out += (i == 0 ? "M" : " L");
            // Flip y so the mathematical orientation is preserved on screen.
            out += num(c.vertices[i].x) + " " + num(-c.vertices[i].y);
        }
        if (c.closed) out += " Z";
        out += "\" fill=\"none\" stroke=\"" + style.stroke + "\" stroke-width=\"" +
               num(style.stroke_width) + "\"/>\n";
    }
    out += "</svg>\n";
    atomic_write_text(path, out);
}

}  // namespace magbill
