#include "gcplocate/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

namespace gcp {

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view field, const char* what, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw ParseError(std::string("bad ") + what + " '" + std::string(field) + "'", line_no);
    }
    return v;
}

long parse_long(std::string_view field, const char* what, std::size_t line_no) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(std::string("bad ") + what + " '" + std::string(field) + "'", line_no);
    }
    return v;
}

}  // namespace gcp
