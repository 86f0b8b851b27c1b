#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

namespace hfm {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

/// Empty string for a missing value.
inline std::string format_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace hfm
