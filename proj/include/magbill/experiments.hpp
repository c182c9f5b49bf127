#pragma once

#include "magbill/config.hpp"
#include "magbill/report.hpp"

namespace magbill {

/// Execute the configured experiment, writing its CSV/SVG artifacts and a
/// JSON report into cfg.out_dir. Returns 0 when every check passes and 1
/// otherwise; configuration problems throw ConfigError (exit code 2 at the
/// CLI level), before any file is written.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace magbill
