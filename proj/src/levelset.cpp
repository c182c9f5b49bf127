#include "magbill/levelset.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace magbill {

namespace {

constexpr double kPoison = 1e17;

bool usable(double v) { return std::isfinite(v) && std::abs(v) < kPoison; }

// Edge keys: horizontal edge from corner (i,j) to (i+1,j) and vertical edge
// from (i,j) to (i,j+1), packed with a parity bit.
inline std::int64_t h_edge(int i, int j, int nx) {
    return (static_cast<std::int64_t>(j) * (nx + 1) + i) * 2;
}
inline std::int64_t v_edge(int i, int j, int nx) {
    return (static_cast<std::int64_t>(j) * (nx + 1) + i) * 2 + 1;
}

}  // namespace

std::vector<OrientedCurve> extract_level_set(const std::function<double(Vec2)>& f,
                                             double level, const Rect& box,
                                             int nx, int ny, double refine_tol) {
    const double dx = (box.hi.x - box.lo.x) / nx;
    const double dy = (box.hi.y - box.lo.y) / ny;
    auto corner = [&](int i, int j) {
        return Vec2{box.lo.x + i * dx, box.lo.y + j * dy};
    };

    std::vector<double> val((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) val[j * (nx + 1) + i] = f(corner(i, j));
    auto v_at = [&](int i, int j) { return val[j * (nx + 1) + i]; };

    // Crossing point on an edge, bisected to refine_tol in position.
    std::unordered_map<std::int64_t, Vec2> crossing;
    auto edge_point = [&](std::int64_t key, Vec2 a, Vec2 b, double va,
                          double vb) -> Vec2 {
        auto it = crossing.find(key);
        if (it != crossing.end()) return it->second;
        double lo = 0.0, hi = 1.0;
        const bool lo_in = va < level;
        (void)vb;
        while (norm(b - a) * (hi - lo) > refine_tol) {
            const double mid = 0.5 * (lo + hi);
            const bool mid_in = f(a + mid * (b - a)) < level;
            if (mid_in == lo_in)
                lo = mid;
            else
                hi = mid;
        }
        const Vec2 p = a + 0.5 * (lo + hi) * (b - a);
        crossing.emplace(key, p);
        return p;
    };

    struct Segment {
        std::int64_t from, to;
        Vec2 p_from, p_to;
    };
    std::vector<Segment> segments;
    std::unordered_map<std::int64_t, int> by_from;

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double v0 = v_at(i, j), v1 = v_at(i + 1, j);
            const double v2 = v_at(i + 1, j + 1), v3 = v_at(i, j + 1);
            if (!usable(v0) || !usable(v1) || !usable(v2) || !usable(v3)) continue;
            const int mask = (v0 < level ? 1 : 0) | (v1 < level ? 2 : 0) |
                             (v2 < level ? 4 : 0) | (v3 < level ? 8 : 0);
            if (mask == 0 || mask == 15) continue;

            const Vec2 c0 = corner(i, j), c1 = corner(i + 1, j);
            const Vec2 c2 = corner(i + 1, j + 1), c3 = corner(i, j + 1);
            const std::int64_t eb = h_edge(i, j, nx), et = h_edge(i, j + 1, nx);
            const std::int64_t el = v_edge(i, j, nx), er = v_edge(i + 1, j, nx);

            auto pt = [&](std::int64_t key) -> Vec2 {
                if (key == eb) return edge_point(eb, c0, c1, v0, v1);
                if (key == et) return edge_point(et, c3, c2, v3, v2);
                if (key == el) return edge_point(el, c0, c3, v0, v3);
                return edge_point(er, c1, c2, v1, v2);
            };
            auto emit = [&](std::int64_t from, std::int64_t to) {
                Segment s{from, to, pt(from), pt(to)};
                by_from[from] = static_cast<int>(segments.size());
                segments.push_back(s);
            };

            switch (mask) {
                case 1: emit(eb, el); break;
                case 2: emit(er, eb); break;
                case 3: emit(er, el); break;
                case 4: emit(et, er); break;
                case 5: {
                    const bool center_in =
                        f(0.25 * (c0 + c1 + c2 + c3)) < level;
                    if (center_in) {
                        emit(eb, er);
                        emit(et, el);
                    } else {
                        emit(eb, el);
                        emit(et, er);
                    }
                    break;
                }
                case 6: emit(et, eb); break;
                case 7: emit(et, el); break;
                case 8: emit(el, et); break;
                case 9: emit(eb, et); break;
                case 10: {
                    const bool center_in =
                        f(0.25 * (c0 + c1 + c2 + c3)) < level;
                    if (center_in) {
                        emit(el, eb);
                        emit(er, et);
                    } else {
                        emit(er, eb);
                        emit(el, et);
                    }
                    break;
                }
                case 11: emit(er, et); break;
                case 12: emit(el, er); break;
                case 13: emit(eb, er); break;
                case 14: emit(el, eb); break;
                default: break;
            }
        }
    }

    std::vector<OrientedCurve> loops;
    std::vector<bool> used(segments.size(), false);
    for (std::size_t start = 0; start < segments.size(); ++start) {
        if (used[start]) continue;
        OrientedCurve loop;
        loop.closed = true;
        std::size_t cur = start;
        bool closed_ok = false;
        while (!used[cur]) {
            used[cur] = true;
            loop.vertices.push_back(segments[cur].p_from);
            const auto next = by_from.find(segments[cur].to);
            if (next == by_from.end()) break;  // chain leaves the usable region
            cur = static_cast<std::size_t>(next->second);
            if (cur == start) {
                closed_ok = true;
                break;
            }
        }
        if (closed_ok && loop.vertices.size() >= 3) loops.push_back(std::move(loop));
    }
    return loops;
}

}  // namespace magbill
