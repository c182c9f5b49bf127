#include "magbill/config.hpp"

#include <cmath>
#include <fstream>

namespace magbill {

namespace {

double require_number(const nlohmann::json& j, const std::string& key,
                      std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing numeric field: " + key);
    }
    if (!j.at(key).is_number()) throw ConfigError("field is not a number: " + key);
    return j.at(key).get<double>();
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    ExperimentConfig cfg;

    if (!doc.contains("metric") || !doc.at("metric").is_object())
        throw ConfigError("config needs a 'metric' object");
    cfg.metric = doc.at("metric");

    if (doc.contains("domain")) {
        const auto& d = doc.at("domain");
        cfg.domain.xmin = require_number(d, "xmin");
        cfg.domain.xmax = require_number(d, "xmax");
        cfg.domain.ymin = require_number(d, "ymin");
        cfg.domain.ymax = require_number(d, "ymax");
        if (!(cfg.domain.xmin < cfg.domain.xmax) ||
            !(cfg.domain.ymin < cfg.domain.ymax))
            throw ConfigError("domain rectangle is empty");
    }

    if (doc.contains("tolerances")) {
        const auto& t = doc.at("tolerances");
        cfg.tol.quad_rel = require_number(t, "quad_rel", cfg.tol.quad_rel);
        cfg.tol.ode_step = require_number(t, "ode_step", cfg.tol.ode_step);
        cfg.tol.root_tol = require_number(t, "root_tol", cfg.tol.root_tol);
        try {
            cfg.tol.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }

    if (doc.contains("experiment")) {
        const auto& e = doc.at("experiment");
        if (e.is_string()) {
            cfg.experiment = e.get<std::string>();
        } else if (e.is_object()) {
            if (e.contains("kind")) cfg.experiment = e.at("kind").get<std::string>();
            cfg.experiment_params = e;
        } else {
            throw ConfigError("'experiment' must be a string or object");
        }
    }

    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        if (o.is_string())
            cfg.out_dir = o.get<std::string>();
        else if (o.is_object() && o.contains("dir"))
            cfg.out_dir = o.at("dir").get<std::string>();
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer())
            throw ConfigError("'seed' must be an integer");
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("verbose")) cfg.verbose = doc.at("verbose").get<bool>();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

ExoticDensitySpec parse_density_spec(const nlohmann::json& d, double R) {
    ExoticDensitySpec spec;
    spec.R = R;
    if (d.is_number()) {
        spec.offset = d.get<double>();
        return spec;
    }
    if (!d.is_object()) throw ConfigError("density must be a number or object");
    if (d.contains("constant")) {
        spec.offset = d.at("constant").get<double>();
        return spec;
    }
    spec.offset = require_number(d, "offset", 1.0);
    if (d.contains("terms")) {
        for (const auto& t : d.at("terms")) {
            ExoticTerm term;
            term.root_index = static_cast<int>(require_number(t, "root_index", 1.0));
            term.weight = require_number(t, "weight", 1.0);
            if (t.contains("phase")) {
                const std::string p = t.at("phase").get<std::string>();
                if (p == "cosine")
                    term.phase = PhaseKind::kCosine;
                else if (p == "sine")
                    term.phase = PhaseKind::kSine;
                else
                    throw ConfigError("phase must be 'cosine' or 'sine'");
            }
            if (t.contains("atoms")) {
                for (const auto& a : t.at("atoms"))
                    term.atoms.push_back(
                        {require_number(a, "angle"), require_number(a, "mass", 1.0)});
            }
            if (t.contains("trig")) {
                const auto& m = t.at("trig");
                TrigMeasure tm;
                tm.m0 = require_number(m, "m0", 0.0);
                if (m.contains("cos"))
                    for (const auto& v : m.at("cos")) tm.cos_k.push_back(v.get<double>());
                if (m.contains("sin"))
                    for (const auto& v : m.at("sin")) tm.sin_k.push_back(v.get<double>());
                term.trig = tm;
            }
            if (term.atoms.empty() && !term.trig)
                throw ConfigError("density term needs 'atoms' or 'trig'");
            spec.terms.push_back(std::move(term));
        }
    }
    return spec;
}

MetricBundle build_metric(const nlohmann::json& spec, const Tolerances& tol) {
    if (!spec.contains("kind")) throw ConfigError("metric needs a 'kind'");
    const std::string kind = spec.at("kind").get<std::string>();
    MetricBundle out;
    out.kind = kind;

    if (kind == "euclidean") {
        out.metric = euclidean_metric();
    } else if (kind == "magnetic_constant") {
        const double R = require_number(spec, "R", 1.0);
        if (!(R > 0.0)) throw ConfigError("magnetic_constant needs R > 0");
        out.magnetic = MagneticMetric::constant(R);
        out.metric = magnetic_metric(*out.magnetic);
        out.metric.R = R;
        out.R = R;
    } else if (kind == "magnetic_form") {
        // Constant-coefficient 1-form u dx1 + w dx2.
        const double u = require_number(spec, "u", 0.0);
        const double w = require_number(spec, "w", 0.0);
        if (std::hypot(u, w) >= 1.0)
            throw ConfigError("magnetic_form needs |(u,w)| < 1 for a positive metric");
        MagneticMetric m;
        m.u = constant_field(u);
        m.w = constant_field(w);
        out.magnetic = m;
        out.metric = magnetic_metric(m);
    } else if (kind == "projective_hamel") {
        ProjectiveMetric pm;
        if (!spec.contains("f")) {
            pm.f = [](double, double) { return 1.0; };
        } else {
            const auto& f = spec.at("f");
            const std::string type =
                f.contains("type") ? f.at("type").get<std::string>() : "constant";
            if (type == "constant") {
                const double v = require_number(f, "value", 1.0);
                if (!(v > 0.0)) throw ConfigError("projective density must be positive");
                pm.f = [v](double, double) { return v; };
            } else if (type == "fourier") {
                const double c0 = require_number(f, "c0", 1.0);
                std::vector<double> ck, sk;
                if (f.contains("cos"))
                    for (const auto& v : f.at("cos")) ck.push_back(v.get<double>());
                if (f.contains("sin"))
                    for (const auto& v : f.at("sin")) sk.push_back(v.get<double>());
                const double amp = require_number(f, "gauss_amp", 0.0);
                const double sigma = require_number(f, "gauss_sigma", 1.0);
                double bound = 0.0;
                for (double v : ck) bound += std::abs(v);
                for (double v : sk) bound += std::abs(v);
                if (!(c0 - bound - std::max(0.0, -amp) > 0.0))
                    throw ConfigError("projective fourier density may vanish");
                pm.f = [c0, ck, sk, amp, sigma](double p, double phi) {
                    double v = c0;
                    for (std::size_t k = 1; k <= ck.size(); ++k)
                        v += ck[k - 1] * std::cos(k * phi);
                    for (std::size_t k = 1; k <= sk.size(); ++k)
                        v += sk[k - 1] * std::sin(k * phi);
                    return v + amp * std::exp(-p * p / (2.0 * sigma * sigma));
                };
            } else {
                throw ConfigError("unknown projective density type: " + type);
            }
        }
        out.projective = pm;
        out.metric = hamel_metric(pm, tol);
    } else if (kind == "circle_lagrangian") {
        const double R = require_number(spec, "R", 1.0);
        if (!(R > 0.0)) throw ConfigError("circle_lagrangian needs R > 0");
        if (!spec.contains("density"))
            throw ConfigError("circle_lagrangian needs a 'density'");
        const ExoticDensitySpec dspec = parse_density_spec(spec.at("density"), R);
        try {
            BuiltCircleMetric built = make_circle_metric(dspec, tol);
            out.circle = built.metric;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        out.metric = circle_metric_support(*out.circle, tol);
        out.R = R;
    } else {
        throw ConfigError("unknown metric kind: " + kind);
    }
    return out;
}

}  // namespace magbill
