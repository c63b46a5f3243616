#pragma once

#include <cstdio>
#include <string>

namespace qfuse::detail {

/// Shortest round-trippable decimal form of a double, for error messages and
/// serialization.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double parsed = 0.0;
    std::sscanf(buf, "%lf", &parsed);
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        std::sscanf(shorter, "%lf", &parsed);
        if (parsed == v) return shorter;
    }
    return buf;
}

}  // namespace qfuse::detail
