#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace corrosim {

// Shortest decimal that round-trips the double exactly. All CSV output goes
// through this so byte-level reproducibility is meaningful.
inline std::string fmt_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

} // namespace corrosim
