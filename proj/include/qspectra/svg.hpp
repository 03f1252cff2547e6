#pragma once

#include <string>
#include <vector>

namespace qspectra::cli {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// Polyline plot with framed axes, tick labels and a legend. Non-finite
/// points break a polyline into separate segments.
std::string render_svg(const PlotSpec& plot);

}  // namespace qspectra::cli
