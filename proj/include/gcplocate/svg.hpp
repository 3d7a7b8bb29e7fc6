#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace gcp {

// Minimal deterministic SVG plotting, enough for the sweep curves and the
// pixel-error scatter. No external plotting dependency.
struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
    bool line = true;  // false -> scatter dots
};

struct SvgAxes {
    std::string title;
    std::string x_label;
    std::string y_label;
    // NaN means auto-fit to data.
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    bool fixed_range = false;
};

void write_svg_plot(const std::filesystem::path& path, const SvgAxes& axes,
                    const std::vector<SvgSeries>& series);

}  // namespace gcp
