#pragma once

#include <string>
#include <vector>

namespace magbill {

/// One verification entry: the check name, the identity it probes (anchor),
/// the measured residual against its tolerance, and the verdict.
struct Check {
    std::string name;
    std::string anchor;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::vector<Check> checks;

    void add(const std::string& name, const std::string& anchor, double residual,
             double tolerance) {
        checks.push_back({name, anchor, residual, tolerance, residual < tolerance});
    }
    /// For checks that must EXCEED a threshold (negative controls).
    void add_floor(const std::string& name, const std::string& anchor,
                   double residual, double floor) {
        checks.push_back({name, anchor, residual, floor, residual > floor});
    }

    bool all_pass() const {
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }

    std::string to_json() const;
};

}  // namespace magbill
