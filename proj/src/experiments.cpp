#include "magbill/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <random>

#include "magbill/billiards.hpp"
#include "magbill/circle_space.hpp"
#include "magbill/geodesics.hpp"
#include "magbill/io.hpp"
#include "magbill/levelset.hpp"
#include "magbill/magnetic_geometry.hpp"
#include "magbill/svg.hpp"

namespace magbill {

namespace {

struct Ctx {
    const ExperimentConfig& cfg;
    MetricBundle bundle;
    std::filesystem::path out;
    std::mt19937_64 rng;
    Report report;

    Vec2 random_point() {
        std::uniform_real_distribution<double> dx(cfg.domain.xmin, cfg.domain.xmax);
        std::uniform_real_distribution<double> dy(cfg.domain.ymin, cfg.domain.ymax);
        const double x = dx(rng);
        return {x, dy(rng)};
    }
    double random_angle() {
        std::uniform_real_distribution<double> d(0.0, kTwoPi);
        return d(rng);
    }
};

double pnum(const nlohmann::json& params, const std::string& key, double fallback) {
    if (!params.is_object() || !params.contains(key)) return fallback;
    if (!params.at(key).is_number())
        throw ConfigError("experiment parameter is not a number: " + key);
    return params.at(key).get<double>();
}

Vec2 pvec(const nlohmann::json& params, const std::string& key, Vec2 fallback) {
    if (!params.is_object() || !params.contains(key)) return fallback;
    const auto& a = params.at(key);
    if (!a.is_array() || a.size() != 2)
        throw ConfigError("experiment parameter must be [x, y]: " + key);
    return {a.at(0).get<double>(), a.at(1).get<double>()};
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::string out = header + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    atomic_write_text(path.string(), out);
}

OrientedCurve circle_polyline(Vec2 center, double r, int n = 512) {
    OrientedCurve c;
    c.closed = true;
    for (int i = 0; i < n; ++i)
        c.vertices.push_back(center + r * unit_vector(kTwoPi * i / n));
    return c;
}

// ---------------------------------------------------------------------------
// geodesic

void run_geodesic(Ctx& ctx) {
    const auto& p = ctx.cfg.experiment_params;
    const double R = ctx.bundle.R > 0.0 ? ctx.bundle.R : 1.0;
    const double s_max = pnum(p, "s_max", kTwoPi * R);
    const double h = pnum(p, "step", ctx.cfg.tol.ode_step * R);
    const double radius_tol = pnum(p, "radius_tol", 1e-5);
    const double rms_tol = pnum(p, "rms_tol", 1e-6);
    const int starts = static_cast<int>(pnum(p, "starts", 1));
    const bool circle_family =
        ctx.bundle.kind == "circle_lagrangian" || ctx.bundle.kind == "magnetic_constant";

    nlohmann::ordered_json fits = nlohmann::ordered_json::array();
    for (int k = 0; k < starts; ++k) {
        Vec2 x0 = ctx.random_point();
        double a0 = ctx.random_angle();
        if (p.is_object() && p.contains("start")) {
            const auto& s = p.at("start");
            x0 = {s.at(0).get<double>(), s.at(1).get<double>()};
            a0 = s.at(2).get<double>();
        }
        const Trajectory t = integrate_finsler_geodesic(ctx.bundle.metric, x0, a0, s_max, h);
        write_trajectory_csv(t, (ctx.out / ("trajectory_" + std::to_string(k) + ".csv")).string());

        if (circle_family) {
            const CircleFit fit = fit_circle(t);
            nlohmann::ordered_json e;
            e["start"] = {x0.x, x0.y, a0};
            e["center"] = {fit.center.x, fit.center.y};
            e["radius"] = fit.radius;
            e["rms_residual"] = fit.rms_residual;
            fits.push_back(e);
            ctx.report.add("fit_radius_" + std::to_string(k),
                           "geodesics of the circle Lagrangian close into R-circles",
                           std::abs(fit.radius - R), radius_tol);
            ctx.report.add("fit_rms_" + std::to_string(k),
                           "geodesics of the circle Lagrangian close into R-circles",
                           fit.rms_residual, rms_tol);
        }
    }
    if (circle_family)
        atomic_write_text((ctx.out / "circle_fits.json").string(), fits.dump(2) + "\n");
    else
        ctx.report.add("trajectories_written", "geodesic integration", 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// reflect

void run_reflect(Ctx& ctx) {
    const auto& p = ctx.cfg.experiment_params;
    const int samples = static_cast<int>(pnum(p, "samples", 100));
    std::uniform_real_distribution<double> inc(0.1, kPi - 0.1);

    if (ctx.bundle.metric.reflection == ReflectionRule::kEqualAngles) {
        double worst = 0.0;
        double worst_conf = 0.0;
        for (int i = 0; i < samples; ++i) {
            const Vec2 x = ctx.random_point();
            const double bd = ctx.random_angle();
            const double in = bd + inc(ctx.rng);
            const Indicatrix ind = indicatrix_at(ctx.bundle.metric, x);
            const auto res = finsler_reflect(ind, bd, ind.radius(in) * unit_vector(in));
            if (res.grazing) continue;
            const double out = heading(res.v);
            worst = std::max(worst,
                             std::abs(wrap_angle((out - bd) + (in - bd))));
            if (i % 5 == 0) {
                Indicatrix scaled = ind;
                const auto base = ind;
                scaled.radius = [base](double th) { return 2.5 * base.radius(th); };
                scaled.radius_deriv = [base](double th) {
                    return 2.5 * base.radius_deriv(th);
                };
                const auto res2 =
                    finsler_reflect(scaled, bd, scaled.radius(in) * unit_vector(in));
                worst_conf = std::max(
                    worst_conf, std::abs(wrap_angle(heading(res2.v) - out)));
            }
        }
        ctx.report.add("equal_angles",
                       "equal-angle reflection for centered-focus conic indicatrices",
                       worst, 1e-9);
        ctx.report.add("conformal_invariance",
                       "conformal invariance of the reflection direction",
                       worst_conf, 1e-10);
        return;
    }

    // Generic metrics: the construction must at least be an involution, and
    // the projective family can be cross-validated against its integral law.
    double worst_inv = 0.0;
    int done = 0;
    for (int i = 0; i < samples && done < samples; ++i) {
        const Vec2 x = ctx.random_point();
        try {
            const Indicatrix ind = indicatrix_at(ctx.bundle.metric, x);
            const double bd = ctx.random_angle();
            const double in = bd + inc(ctx.rng);
            const auto once = finsler_reflect(ind, bd, ind.radius(in) * unit_vector(in));
            if (once.grazing) continue;
            const auto twice = finsler_reflect(ind, bd, once.v);
            worst_inv = std::max(worst_inv,
                                 std::abs(wrap_angle(heading(twice.v) - in)));
            ++done;
        } catch (const DegenerateMetricError&) {
            continue;  // resample away from degenerate spots
        }
    }
    ctx.report.add("reflection_involution", "double reflection is the identity",
                   worst_inv, 1e-9);

    if (ctx.bundle.projective) {
        double worst_c = 0.0;
        for (int i = 0; i < 16; ++i) {
            const Vec2 x = ctx.random_point();
            const double a = ctx.random_angle();
            const double b = a + inc(ctx.rng);
            const double g1 = projective_reflect(*ctx.bundle.projective, x, a, b, ctx.cfg.tol);
            const Indicatrix ind = indicatrix_at(ctx.bundle.metric, x);
            const auto g2 = finsler_reflect(ind, a, ind.radius(b) * unit_vector(b));
            if (g2.grazing) continue;
            worst_c = std::max(worst_c, std::abs(wrap_angle(g1 - heading(g2.v))));
        }
        ctx.report.add("projective_vs_indicatrix",
                       "integral reflection law vs tangent construction", worst_c,
                       1e-7);
    }
}

// ---------------------------------------------------------------------------
// billiard

BilliardTable make_table(Ctx& ctx, const nlohmann::json& p) {
    BilliardTable table;
    table.metric = ctx.bundle.metric;
    table.step = pnum(p, "step", ctx.cfg.tol.ode_step);
    table.arc_cap = pnum(p, "arc_cap", 0.0);
    if (table.arc_cap <= 0.0 && !(table.metric.R > 0.0)) table.arc_cap = 100.0;

    if (!p.is_object() || !p.contains("table"))
        throw ConfigError("billiard experiment needs a 'table'");
    const auto& t = p.at("table");
    if (t.contains("disc")) {
        const auto& d = t.at("disc");
        table.boundary =
            disc_boundary(pvec(d, "center", {0, 0}), pnum(d, "radius", 1.0));
    } else if (t.contains("polygon")) {
        OrientedCurve poly;
        poly.closed = true;
        for (const auto& v : t.at("polygon"))
            poly.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        table.boundary = polyline_boundary(poly);
    } else if (t.contains("string_level")) {
        if (ctx.bundle.kind != "magnetic_constant")
            throw ConfigError("string_level tables need the magnetic_constant metric");
        const auto& sl = t.at("string_level");
        const Vec2 O = pvec(sl, "center", {0, 0});
        const double rho = pnum(sl, "rho", 0.3);
        const double level = pnum(sl, "level", 2.4);
        const double R = ctx.bundle.R;
        table.boundary = implicit_boundary(
            [O, rho, R](Vec2 x) { return string_function(O, rho, R, x); }, level, O);
        table.boundary.polyline = string_level_set(O, rho, R, level, 512);
    } else {
        throw ConfigError("unknown table kind");
    }
    return table;
}

void run_billiard(Ctx& ctx) {
    const auto& p = ctx.cfg.experiment_params;
    BilliardTable table = make_table(ctx, p);
    const int bounces = static_cast<int>(pnum(p, "bounces", 20));

    BilliardState s;
    if (p.contains("start") && p.at("start").is_object()) {
        const auto& st = p.at("start");
        if (st.contains("point")) {
            s.point = pvec(st, "point", {0, 0});
            s.direction = pnum(st, "direction", 0.0);
        } else {
            // boundary_angle places the start on a disc table rim.
            if (!p.at("table").contains("disc"))
                throw ConfigError("boundary_angle start requires a disc table");
            const auto& d = p.at("table").at("disc");
            const Vec2 c = pvec(d, "center", {0, 0});
            const double r = pnum(d, "radius", 1.0);
            const double th = pnum(st, "boundary_angle", 0.0);
            s.point = c + r * unit_vector(th);
            const double tang = heading(rot90(s.point - c));
            s.direction = tang + pnum(st, "incidence", 0.5);
        }
    } else {
        throw ConfigError("billiard experiment needs a 'start'");
    }

    std::vector<std::vector<double>> rows;
    std::vector<std::pair<OrientedCurve, SvgStyle>> layers;
    if (!table.boundary.polyline.vertices.empty())
        layers.push_back({table.boundary.polyline, {"#333333", 0.008}});

    std::vector<double> incidences;
    int completed = 0;
    for (int k = 0; k < bounces; ++k) {
        std::vector<Vec2> chord;
        const double before = s.direction;
        try {
            s = billiard_step(table, s, &chord);
        } catch (const std::runtime_error&) {
            break;
        }
        const double tang = table.boundary.tangent_heading(s.point);
        const double incidence = std::abs(wrap_angle(before - tang));
        incidences.push_back(incidence);
        rows.push_back({static_cast<double>(k), s.param, incidence});
        OrientedCurve chord_curve;
        chord_curve.closed = false;
        chord_curve.vertices = std::move(chord);
        layers.push_back({chord_curve, {"#1f77b4", 0.006}});
        ++completed;
    }
    write_csv(ctx.out / "orbit.csv", "bounce,param,incidence", rows);
    if (!layers.empty()) emit_svg(layers, (ctx.out / "orbit.svg").string());

    ctx.report.add_floor("bounces_completed", "billiard map iteration",
                         static_cast<double>(completed), bounces - 0.5);
    if (p.at("table").contains("disc") && ctx.bundle.kind == "magnetic_constant" &&
        incidences.size() > 1) {
        double lo = 1e300, hi = -1e300;
        for (double v : incidences) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        ctx.report.add("incidence_invariance",
                       "rotational symmetry of the disc billiard", hi - lo, 1e-6);
    }
}

// ---------------------------------------------------------------------------
// string construction

void run_string(Ctx& ctx) {
    if (ctx.bundle.kind != "magnetic_constant")
        throw ConfigError("string experiment needs the magnetic_constant metric");
    const auto& p = ctx.cfg.experiment_params;
    const Vec2 O = pvec(p, "center", {0, 0});
    const double rho = pnum(p, "rho", 0.3);
    const double level = pnum(p, "level", 2.4);
    const int bounces = static_cast<int>(pnum(p, "bounces", 20));
    const double R = ctx.bundle.R;

    const OrientedCurve table_curve = string_level_set(O, rho, R, level, 512);
    {
        std::vector<std::vector<double>> rows;
        for (const Vec2& v : table_curve.vertices) rows.push_back({v.x, v.y});
        write_csv(ctx.out / "level_set.csv", "x1,x2", rows);
    }

    double sym = 0.0;
    const double d_ref = norm(table_curve.vertices[0] - O);
    const double f_ref = string_function(O, rho, R, table_curve.vertices[0]);
    for (int i = 1; i < 12; ++i)
        sym = std::max(sym, std::abs(string_function(O, rho, R,
                                                     O + d_ref * unit_vector(kTwoPi * i / 12.0)) -
                                     f_ref));
    ctx.report.add("radial_symmetry", "string function depends only on |X - O|",
                   sym, 1e-9);
    ctx.report.add("level_set_convex", "level sets are closed convex curves",
                   is_convex_ccw(table_curve) ? 0.0 : 1.0, 0.5);

    BilliardTable table;
    table.metric = ctx.bundle.metric;
    table.step = ctx.cfg.tol.ode_step;
    table.boundary = implicit_boundary(
        [O, rho, R](Vec2 x) { return string_function(O, rho, R, x); }, level, O);
    table.boundary.polyline = table_curve;

    const Vec2 X0 = table_curve.vertices[0];
    BilliardState s;
    s.point = X0;
    s.direction = string_loop(O, rho, R, X0).launch_heading;

    std::vector<std::pair<OrientedCurve, SvgStyle>> layers;
    layers.push_back({table_curve, {"#333333", 0.008}});
    layers.push_back({circle_polyline(O, rho), {"#d62728", 0.008}});

    double worst_gap = 0.0;
    for (int k = 0; k < bounces; ++k) {
        std::vector<Vec2> chord;
        s = billiard_step(table, s, &chord);
        const Vec2 larmor = s.point + R * rot90(unit_vector(s.direction));
        worst_gap = std::max(worst_gap, std::abs(norm(larmor - O) - (R - rho)));
        OrientedCurve chord_curve;
        chord_curve.closed = false;
        chord_curve.vertices = std::move(chord);
        layers.push_back({chord_curve, {"#1f77b4", 0.006}});
    }
    emit_svg(layers, (ctx.out / "string.svg").string());
    ctx.report.add("caustic_tangency", "tangency of reflected arcs to the obstacle",
                   worst_gap, 1e-4);
}

// ---------------------------------------------------------------------------
// magnetic ellipse

void run_ellipse(Ctx& ctx) {
    if (ctx.bundle.kind != "magnetic_constant")
        throw ConfigError("ellipse experiment needs the magnetic_constant metric");
    const auto& p = ctx.cfg.experiment_params;
    const double R = ctx.bundle.R;
    const Vec2 A = pvec(p, "A", {-0.3, 0.0});
    const Vec2 B = pvec(p, "B", {0.3, 0.0});
    const double c = pnum(p, "c", 1.6);
    const int grid = static_cast<int>(pnum(p, "grid", 400));
    const int probes = static_cast<int>(pnum(p, "probes", 20));

    const OrientedCurve curve = magnetic_ellipse(A, B, c, R, grid);
    {
        std::vector<std::vector<double>> rows;
        for (const Vec2& v : curve.vertices) rows.push_back({v.x, v.y});
        write_csv(ctx.out / "ellipse.csv", "x1,x2", rows);
    }
    if (curve.vertices.empty()) {
        ctx.report.add_floor("locus_nonempty", "level set of d(A,X) + d(X,B)", 0.0, 0.5);
        return;
    }
    emit_svg({{curve, {"#1f77b4", 0.006}}}, (ctx.out / "ellipse.svg").string());

    double on_locus = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, curve.vertices.size() / probes);
    for (std::size_t i = 0; i < curve.vertices.size(); i += stride)
        on_locus = std::max(on_locus,
                            std::abs(ellipse_sum_distance(A, B, R, curve.vertices[i]) - c));
    ctx.report.add("on_locus", "level set of d(A,X) + d(X,B)", on_locus, 1e-8);

    if (norm(A - B) < 1e-14) {
        double lo = 1e300, hi = -1e300;
        for (const Vec2& v : curve.vertices) {
            lo = std::min(lo, norm(v - A));
            hi = std::max(hi, norm(v - A));
        }
        ctx.report.add("degenerate_circle",
                       "merged foci give a Euclidean circle", hi - lo, 1e-8);
        return;
    }

    // Focusing: incoming distance-realizing arc from A, equal-angle
    // reflection at the locus, outgoing Larmor circle must pass through B.
    auto fd_tangent = [&](Vec2 x) {
        const double h = 1e-6;
        const double gx = (ellipse_sum_distance(A, B, R, {x.x + h, x.y}) -
                           ellipse_sum_distance(A, B, R, {x.x - h, x.y})) / (2.0 * h);
        const double gy = (ellipse_sum_distance(A, B, R, {x.x, x.y + h}) -
                           ellipse_sum_distance(A, B, R, {x.x, x.y - h})) / (2.0 * h);
        return heading(rot90(Vec2{gx, gy}));
    };
    double worst_miss = 0.0;
    for (std::size_t i = 0; i < curve.vertices.size(); i += stride) {
        const Vec2 X = curve.vertices[i];
        const double chord = norm(X - A);
        const Vec2 n = rot90(X - A) / chord;
        const double m = std::sqrt(std::max(0.0, R * R - 0.25 * chord * chord));
        const Vec2 c_in = 0.5 * (A + X) + m * n;  // minor ccw arc A -> X
        const double beta = heading(rot90(X - c_in));
        const double gamma = 2.0 * fd_tangent(X) - beta;
        const Vec2 c_out = X + R * rot90(unit_vector(gamma));
        worst_miss = std::max(worst_miss, std::abs(norm(B - c_out) - R));
    }
    ctx.report.add("focusing", "rays from A reflect through B", worst_miss, 1e-4);
}

// ---------------------------------------------------------------------------
// density

void run_density(Ctx& ctx) {
    if (!ctx.bundle.circle)
        throw ConfigError("density experiment needs the circle_lagrangian metric");
    const auto& p = ctx.cfg.experiment_params;
    const int n = static_cast<int>(pnum(p, "grid", 101));
    const int centers = static_cast<int>(pnum(p, "centers", 100));
    const ScalarField& g = ctx.bundle.circle->g;
    const double R = ctx.bundle.circle->R;

    std::vector<std::vector<double>> rows;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Vec2 x{ctx.cfg.domain.xmin +
                             (ctx.cfg.domain.xmax - ctx.cfg.domain.xmin) * i / (n - 1),
                         ctx.cfg.domain.ymin +
                             (ctx.cfg.domain.ymax - ctx.cfg.domain.ymin) * j / (n - 1)};
            rows.push_back({x.x, x.y, g.value(x)});
        }
    write_csv(ctx.out / "density.csv", "x1,x2,g", rows);

    double lo = 1e300, hi = -1e300, orth = 0.0;
    for (int i = 0; i < centers; ++i) {
        const Vec2 c = ctx.random_point();
        const double v = disc_integral(g, c, R);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        const auto [mc, ms] = circle_orthogonality(g, c, R, ctx.cfg.tol);
        orth = std::max({orth, std::abs(mc), std::abs(ms)});
    }
    ctx.report.add("disc_invariance", "constant disc integrals",
                   (hi - lo) / std::max(1e-300, std::abs(hi)), 1e-8);
    ctx.report.add("circle_orthogonality", "cosine/sine moments on circles", orth,
                   1e-9);
}

// ---------------------------------------------------------------------------
// verify-all

void verify_bessel_layer(Ctx& ctx) {
    // Independent bisection oracle on the fixed bracket (3, 4).
    double lo = 3.0, hi = 4.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (bessel_j(1, lo) * bessel_j(1, mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    ctx.report.add("j1_first_root", "first positive root of J1",
                   std::abs(bessel_j1_roots(1)[0] - oracle), 1e-9);

    std::uniform_real_distribution<double> dw(0.1, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double w = dw(ctx.rng);
        const double lhs =
            quad_1d([](double t) { return bessel_j(0, t) * t; }, 0.0, w, ctx.cfg.tol);
        worst = std::max(worst, std::abs(lhs - w * bessel_j(1, w)));
    }
    ctx.report.add("j0_moment_identity", "integral of J0(w) w dw equals w J1(w)",
                   worst, 1e-9);
}

void run_verify_all(Ctx& ctx) {
    verify_bessel_layer(ctx);
    const Tolerances& tol = ctx.cfg.tol;

    if (ctx.bundle.circle) {
        const CircleMetric& c = *ctx.bundle.circle;
        const double R = c.R;

        ProbeGrid probes;
        probes.lo = {ctx.cfg.domain.xmin, ctx.cfg.domain.ymin};
        probes.hi = {ctx.cfg.domain.xmax, ctx.cfg.domain.ymax};
        probes.nx = probes.ny = 7;
        const auto rep = validate_circle_metric(c, probes, tol);
        ctx.report.add("center_of_mass", "cosine/sine moments on circles",
                       rep.max_center_residual, 1e-8);
        ctx.report.add("gauge_identity", "curl of the gauge matches the density",
                       rep.max_gauge_residual, 1e-8);
        ctx.report.add_floor("density_positive", "strict positivity of the density",
                             rep.min_density, 0.0);

        double el = 0.0;
        for (int i = 0; i < 20; ++i)
            el = std::max(el, norm(el_residual(c, ctx.random_point(),
                                               ctx.random_angle(), tol)));
        ctx.report.add("circle_extremal_equation", "circle-extremal equation residual",
                       el, 1e-7);

        double rad = 0.0, rms = 0.0;
        for (int i = 0; i < 3; ++i) {
            const Trajectory t = integrate_finsler_geodesic(
                ctx.bundle.metric, ctx.random_point(), ctx.random_angle(), kTwoPi * R,
                tol.ode_step * R);
            const CircleFit fit = fit_circle(t);
            rad = std::max(rad, std::abs(fit.radius - R));
            rms = std::max(rms, fit.rms_residual);
        }
        ctx.report.add("geodesic_radius",
                       "geodesics of the circle Lagrangian close into R-circles", rad,
                       1e-5);
        ctx.report.add("geodesic_rms",
                       "geodesics of the circle Lagrangian close into R-circles", rms,
                       1e-6);

        std::vector<Vec2> centers;
        for (int i = 0; i < 12; ++i) centers.push_back(ctx.random_point());
        const ConstancyReport constancy = circle_length_constancy(c, centers, tol);
        ctx.report.add("circle_length_constancy", "constant Finsler length of R-circles",
                       constancy.max_spread, 1e-8);
        {
            nlohmann::ordered_json probes_json;
            probes_json["circle_lengths"] = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < centers.size(); ++i)
                probes_json["circle_lengths"].push_back(
                    {centers[i].x, centers[i].y, constancy.lengths[i]});
            probes_json["mean_length"] = constancy.mean;
            probes_json["max_spread"] = constancy.max_spread;
            nlohmann::ordered_json discs = nlohmann::ordered_json::array();
            for (int i = 0; i < 12; ++i) {
                const Vec2 x = ctx.random_point();
                discs.push_back({x.x, x.y, disc_integral(c.g, x, R)});
            }
            probes_json["disc_integrals"] = discs;
            atomic_write_text((ctx.out / "probes.json").string(),
                              probes_json.dump(2) + "\n");
        }

        const auto curve = make_ellipse({0.2, 0.1}, 0.8, 0.4);
        const auto [lhs, rhs] = length_area_check(c, curve, tol);
        ctx.report.add("length_area_identity", "length equals front-area plus circle constant",
                       std::abs(lhs - rhs) / (1.0 + std::abs(lhs)), 1e-6);

        double lo = 1e300, hi = -1e300, orth = 0.0;
        for (int i = 0; i < 30; ++i) {
            const Vec2 x = ctx.random_point();
            const double v = disc_integral(c.g, x, R);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            const auto [mc, ms] = circle_orthogonality(c.g, x, R, tol);
            orth = std::max({orth, std::abs(mc), std::abs(ms)});
        }
        ctx.report.add("disc_invariance", "constant disc integrals",
                       (hi - lo) / std::max(1e-300, std::abs(hi)), 1e-8);
        ctx.report.add("circle_orthogonality", "cosine/sine moments on circles",
                       orth, 1e-9);
    }

    if (ctx.bundle.kind == "magnetic_constant") {
        const double R = ctx.bundle.R;
        double rad = 0.0;
        for (int i = 0; i < 3; ++i) {
            const Trajectory t = integrate_finsler_geodesic(
                ctx.bundle.metric, ctx.random_point(), ctx.random_angle(),
                kTwoPi * R, tol.ode_step * R);
            rad = std::max(rad, std::abs(fit_circle(t).radius - R));
        }
        ctx.report.add("larmor_radius", "constant field bends at curvature 1/R", rad,
                       1e-8);

        std::uniform_real_distribution<double> ds(0.2, kTwoPi);
        double arc_defect = 0.0;
        const MagneticMetric mm = MagneticMetric::constant(R);
        for (int i = 0; i < 10; ++i) {
            const ArcSpec arc{ctx.random_point(), R, ctx.random_angle(), ds(ctx.rng)};
            auto f = [&](double phi) {
                const Vec2 x = arc.center + arc.R * unit_vector(phi);
                const Vec2 v = arc.R * rot90(unit_vector(phi));
                return magnetic_lagrangian_eval(mm, x, v);
            };
            arc_defect = std::max(
                arc_defect, std::abs(arc_distance(R, arc) -
                                     quad_1d(f, arc.start, arc.start + arc.sweep, tol)));
        }
        ctx.report.add("arc_distance", "closed-form arc distance vs Lagrangian quadrature",
                       arc_defect, 1e-10);

        double len_defect = 0.0, front_defect = 0.0;
        for (int i = 0; i < 3; ++i) {
            const auto curve = support_form_curve(
                random_convex_support(ctx.cfg.seed + 100 + i));
            auto f = [&](double th) {
                return magnetic_lagrangian_eval(mm, curve.point(th), curve.velocity(th));
            };
            const double direct = quad_1d(f, 0.0, kTwoPi, tol);
            const double by_area = finsler_length_closed(curve, R, tol);
            const double by_front = length_via_front(curve, R, tol);
            len_defect = std::max(len_defect, std::abs(direct - by_area));
            front_defect = std::max(front_defect, std::abs(by_area - by_front));
        }
        ctx.report.add("length_via_area", "l - S/R vs Lagrangian quadrature",
                       len_defect, 1e-8);
        ctx.report.add("length_via_front", "l - S/R vs front-area formula",
                       front_defect, 1e-8);
    }

    if (ctx.bundle.metric.reflection == ReflectionRule::kEqualAngles &&
        ctx.bundle.kind != "euclidean") {
        std::uniform_real_distribution<double> inc(0.1, kPi - 0.1);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const Vec2 x = ctx.random_point();
            const double bd = ctx.random_angle();
            const double in = bd + inc(ctx.rng);
            const Indicatrix ind = indicatrix_at(ctx.bundle.metric, x);
            const auto res = finsler_reflect(ind, bd, ind.radius(in) * unit_vector(in));
            if (res.grazing) continue;
            worst = std::max(worst,
                             std::abs(wrap_angle((heading(res.v) - bd) + (in - bd))));
        }
        ctx.report.add("equal_angles",
                       "equal-angle reflection for centered-focus conic indicatrices",
                       worst, 1e-9);
    }

    if (ctx.bundle.projective) {
        double worst = 0.0;
        std::uniform_real_distribution<double> inc(0.2, kPi - 0.2);
        for (int i = 0; i < 10; ++i) {
            const Vec2 x = ctx.random_point();
            const double a = ctx.random_angle();
            const double b = a + inc(ctx.rng);
            const double g1 =
                projective_reflect(*ctx.bundle.projective, x, a, b, tol);
            const Indicatrix ind = indicatrix_at(ctx.bundle.metric, x);
            const auto g2 = finsler_reflect(ind, a, ind.radius(b) * unit_vector(b));
            if (g2.grazing) continue;
            worst = std::max(worst, std::abs(wrap_angle(g1 - heading(g2.v))));
        }
        ctx.report.add("projective_vs_indicatrix",
                       "integral reflection law vs tangent construction", worst, 1e-7);
    }

    if (ctx.bundle.kind == "euclidean") {
        const Trajectory t = integrate_finsler_geodesic(ctx.bundle.metric,
                                                        ctx.random_point(),
                                                        ctx.random_angle(), 2.0, 1e-2);
        double dev = 0.0;
        for (const auto& s : t.samples)
            dev = std::max(dev, std::abs(s.alpha - t.samples.front().alpha));
        ctx.report.add("straight_geodesics", "flat metric has straight extremals", dev,
                       1e-12);
    }
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
    static const std::vector<std::string> kinds = {
        "geodesic", "reflect", "billiard", "string",
        "ellipse",  "density", "verify-all"};
    if (std::find(kinds.begin(), kinds.end(), cfg.experiment) == kinds.end())
        throw ConfigError("unknown experiment: '" + cfg.experiment + "'");

    Ctx ctx{cfg, build_metric(cfg.metric, cfg.tol), cfg.out_dir,
            std::mt19937_64(cfg.seed), Report{}};
    std::filesystem::create_directories(ctx.out);

    if (cfg.experiment == "geodesic")
        run_geodesic(ctx);
    else if (cfg.experiment == "reflect")
        run_reflect(ctx);
    else if (cfg.experiment == "billiard")
        run_billiard(ctx);
    else if (cfg.experiment == "string")
        run_string(ctx);
    else if (cfg.experiment == "ellipse")
        run_ellipse(ctx);
    else if (cfg.experiment == "density")
        run_density(ctx);
    else
        run_verify_all(ctx);

    atomic_write_text((ctx.out / "report.json").string(), ctx.report.to_json());
    if (cfg.verbose) {
        for (const Check& c : ctx.report.checks)
            std::fprintf(stderr, "%-28s %-10s residual %.3e tol %.3e\n",
                         c.name.c_str(), c.pass ? "pass" : "FAIL", c.residual,
                         c.tolerance);
    }
    return ctx.report.all_pass() ? 0 : 1;
}

}  // namespace magbill
