#pragma once

#include <string>
#include <vector>

namespace powerloop {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool scatter = false; // circles instead of a polyline
};

// Callout anchored at a data point: dashed drop line plus a text label.
struct Marker {
    double x = 0.0;
    double y = 0.0;
    std::string text;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<Marker> markers;
    int width = 860;
    int height = 460;
};

// Self-contained SVG document: axes, grid, legend, series, markers.
// Non-finite samples split a polyline rather than corrupting it.
std::string render_svg(const PlotSpec& spec);

void write_svg(const PlotSpec& spec, const std::string& path);

} // namespace powerloop
