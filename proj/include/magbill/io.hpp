#pragma once

#include <string>

namespace magbill {

/// Write-temp-then-rename so readers never observe a partial file.
void atomic_write_text(const std::string& path, const std::string& content);

/// Shortest round-trip decimal formatting (17 significant digits).
std::string format_double(double v);

}  // namespace magbill
