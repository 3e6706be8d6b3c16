#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace pfab {

/// 17 significant digits: round-trips every double exactly.
inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ",";
        os << cells[i];
    }
    os << "\n";
}

}  // namespace pfab
