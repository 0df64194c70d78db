#pragma once

#include <cstdio>
#include <string>

namespace ginibre::csv {

inline constexpr const char* kSchemaVersion = "1";

/// Round-trip representation: 17 significant digits, '.' separator.
inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace ginibre::csv
