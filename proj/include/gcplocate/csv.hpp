#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gcp {

struct ParseError : std::runtime_error {
    std::size_t line_no = 0;
    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}
};

// Shortest decimal text that parses back to the identical double.
std::string fmt_double(double v);
// Fixed number of decimals, for formats that specify rounding (e.g. 0.01 px).
std::string fmt_fixed(double v, int decimals);

std::vector<std::string> split_csv(std::string_view line);

double parse_double(std::string_view field, const char* what, std::size_t line_no);
long parse_long(std::string_view field, const char* what, std::size_t line_no);

}  // namespace gcp
