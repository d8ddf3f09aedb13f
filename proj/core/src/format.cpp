#include "cohmms/format.hpp"

#include <charconv>
#include <cmath>

namespace cohmms {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

namespace {

std::string trim_general(double x, int precision) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general,
                                   precision);
    std::string s(buf, ptr);
    // to_chars(general) already drops trailing zeros; nothing left to trim.
    return s;
}

} // namespace

std::string format_sig12(double x) {
    if (x == 0.0) return "0";
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    // Use the shortest representation when it needs at most 12 significant
    // digits; otherwise round to 12.
    std::string shortest = format_double(x);
    int digits = 0;
    for (char c : shortest)
        if (c >= '0' && c <= '9') ++digits;
    if (digits <= 12) return shortest;
    return trim_general(x, 12);
}

} // namespace cohmms
