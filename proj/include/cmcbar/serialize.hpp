#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

namespace cmcbar {

/// JSON has no infinity literal; non-finite reals are emitted as strings so
/// reports stay parseable ("inf", "-inf", "nan").
inline nlohmann::ordered_json json_real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

/// Shortest round-trip decimal form, '.' separator; non-finite as inf/-inf/nan.
inline std::string format_real(double v) {
  if (!std::isfinite(v)) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace cmcbar
