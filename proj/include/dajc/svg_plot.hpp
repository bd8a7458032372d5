#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dajc {

// Minimal static line-chart writer for sweep reports. One chart per file,
// linear axes, automatic ranges and ticks, fixed color palette, text legend.
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

// Renders the chart and writes it to `path` (IoError on failure).
void write_svg_plot(const PlotSpec& spec, const std::string& path);

}  // namespace dajc
