#include "gcplocate/svg.hpp"

#include "gcplocate/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace gcp {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 520;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 30;
constexpr int kMarginTop = 48;
constexpr int kMarginBottom = 56;

struct Range {
    double lo = 0.0, hi = 1.0;
    double span() const { return hi - lo; }
};

Range fit(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

std::string tick_label(double v) {
    // short labels; fmt_double would print 0.30000000000000004 style artifacts
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const SvgAxes& axes,
                    const std::vector<SvgSeries>& series) {
    Range xr, yr;
    if (axes.fixed_range) {
        xr = {axes.x_min, axes.x_max};
        yr = {axes.y_min, axes.y_max};
    } else {
        double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
        bool first = true;
        for (const SvgSeries& s : series) {
            for (const auto& [x, y] : s.points) {
                if (first) {
                    xlo = xhi = x;
                    ylo = yhi = y;
                    first = false;
                }
                xlo = std::min(xlo, x);
                xhi = std::max(xhi, x);
                ylo = std::min(ylo, y);
                yhi = std::max(yhi, y);
            }
        }
        xr = fit(xlo, xhi);
        yr = fit(ylo, yhi);
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / xr.span() * plot_w; };
    auto py = [&](double y) { return kMarginTop + plot_h - (y - yr.lo) / yr.span() * plot_h; };

    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string(), 0);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        << "font-family=\"sans-serif\">" << axes.title << "</text>\n";

    // frame + ticks
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
    const int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double xv = xr.lo + xr.span() * t / ticks;
        const double yv = yr.lo + yr.span() * t / ticks;
        out << "<line x1=\"" << px(xv) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << px(xv)
            << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << px(xv) << "\" y=\"" << kMarginTop + plot_h + 20
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
            << tick_label(xv) << "</text>\n";
        out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << kMarginLeft
            << "\" y2=\"" << py(yv) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << kMarginLeft - 9 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
            << tick_label(yv) << "</text>\n";
    }
    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << axes.x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">" << axes.y_label
        << "</text>\n";

    int legend_y = kMarginTop + 14;
    for (const SvgSeries& s : series) {
        if (s.line) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
            for (const auto& [x, y] : s.points) {
                out << fmt_fixed(px(x), 2) << ',' << fmt_fixed(py(y), 2) << ' ';
            }
            out << "\"/>\n";
        }
        for (const auto& [x, y] : s.points) {
            out << "<circle cx=\"" << fmt_fixed(px(x), 2) << "\" cy=\"" << fmt_fixed(py(y), 2)
                << "\" r=\"" << (s.line ? 3 : 2) << "\" fill=\"" << s.color << "\"/>\n";
        }
        out << "<rect x=\"" << kWidth - kMarginRight - 150 << "\" y=\"" << legend_y - 9
            << "\" width=\"12\" height=\"12\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << kWidth - kMarginRight - 132 << "\" y=\"" << legend_y + 2
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
        legend_y += 18;
    }
    out << "</svg>\n";
}

}  // namespace gcp
