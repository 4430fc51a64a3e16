#ifndef DATAFLOW_SVG_HPP
#define DATAFLOW_SVG_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dataflow {

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y) in data coordinates
};

/// Renders a static line chart: axes, tick labels, a legend, and exactly one
/// <polyline> per series. Output is valid XML with fixed-precision coordinates,
/// so identical inputs give identical bytes.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, std::span<const SvgSeries> series);

} // namespace dataflow

#endif
