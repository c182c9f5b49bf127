#include "magbill/report.hpp"

#include "json.hpp"

namespace magbill {

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    j["checks"] = nlohmann::ordered_json::array();
    for (const Check& c : checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["anchor"] = c.anchor;
        e["residual"] = c.residual;
        e["tolerance"] = c.tolerance;
        e["verdict"] = c.pass ? "pass" : "fail";
        j["checks"].push_back(e);
    }
    j["all_pass"] = all_pass();
    return j.dump(2) + "\n";
}

}  // namespace magbill
