#include "dajc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dajc/core_types.hpp"

namespace dajc {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 780.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 440.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range nice_range(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        return {0.0, 1.0};
    }
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::string fmt(double v) {
    std::ostringstream os;
    if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3)) {
        os.precision(2);
        os << std::scientific << v;
    } else {
        os.precision(6);
        os << v;
    }
    return os.str();
}

}  // namespace

void write_svg_plot(const PlotSpec& spec, const std::string& path) {
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -std::numeric_limits<double>::infinity();
    double y_lo = x_lo;
    double y_hi = x_hi;
    for (const PlotSeries& s : spec.series) {
        for (const auto& [x, y] : s.points) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    const Range xr = nice_range(x_lo, x_hi);
    const Range yr = nice_range(y_lo, y_hi);
    auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kRight - kLeft); };
    auto sy = [&](double y) { return kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">"
        << spec.title << "</text>\n";

    // Axes with 5 ticks each.
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fx = xr.lo + (xr.hi - xr.lo) * t / 5.0;
        const double fy = yr.lo + (yr.hi - yr.lo) * t / 5.0;
        svg << "<line x1=\"" << sx(fx) << "\" y1=\"" << kBottom << "\" x2=\"" << sx(fx)
            << "\" y2=\"" << kBottom + 6 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << sx(fx) << "\" y=\"" << kBottom + 22
            << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt(fx) << "</text>\n";
        svg << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << sy(fy) << "\" x2=\"" << kLeft
            << "\" y2=\"" << sy(fy) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kLeft - 10 << "\" y=\"" << sy(fy) + 4
            << "\" text-anchor=\"end\" font-size=\"12\">" << fmt(fy) << "</text>\n";
    }
    svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-size=\"14\">" << spec.x_label << "</text>\n";
    svg << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
        << (kTop + kBottom) / 2 << ")\">" << spec.y_label << "</text>\n";

    // Series polylines + legend.
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : spec.series[s].points) {
            svg << sx(x) << "," << sy(y) << " ";
        }
        svg << "\"/>\n";
        for (const auto& [x, y] : spec.series[s].points) {
            svg << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        }
        const double ly = kTop + 18.0 * static_cast<double>(s);
        svg << "<rect x=\"" << kRight - 170 << "\" y=\"" << ly - 10
            << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << kRight - 152 << "\" y=\"" << ly << "\" font-size=\"12\">"
            << spec.series[s].label << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open SVG file for writing: " + path);
    }
    out << svg.str();
    if (!out) {
        throw IoError("failed writing SVG file: " + path);
    }
}

}  // namespace dajc
