#include "dataflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dataflow {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 560.0;   // legend sits to the right of this
constexpr double kTop = 48.0;
constexpr double kBottom = 372.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, std::span<const SvgSeries> series) {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [px, py] : s.points) {
            if (first) {
                x_min = x_max = px;
                y_min = py;
                y_max = py;
                first = false;
            } else {
                x_min = std::min(x_min, px);
                x_max = std::max(x_max, px);
                y_min = std::min(y_min, py);
                y_max = std::max(y_max, py);
            }
        }
    }
    // Index values live in [0, 1]; keep that span visible so curves read absolutely.
    y_min = std::min(y_min, 0.0);
    y_max = std::max(y_max, 1.0);
    if (x_max == x_min) {
        x_min -= 0.5;
        x_max += 0.5;
    }

    const auto sx = [&](double v) {
        return kLeft + (v - x_min) / (x_max - x_min) * (kRight - kLeft);
    };
    const auto sy = [&](double v) {
        return kBottom - (v - y_min) / (y_max - y_min) * (kBottom - kTop);
    };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth, "%.0f")
        << "\" height=\"" << fmt(kHeight, "%.0f") << "\" viewBox=\"0 0 " << fmt(kWidth, "%.0f")
        << " " << fmt(kHeight, "%.0f") << "\">\n";
    out << "  <rect width=\"" << fmt(kWidth, "%.0f") << "\" height=\"" << fmt(kHeight, "%.0f")
        << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << fmt((kLeft + kRight) / 2) << "\" y=\"24\" font-family=\"sans-serif\""
        << " font-size=\"15\" text-anchor=\"middle\">" << escape(title) << "</text>\n";

    // Gridlines and tick labels, 5 divisions per axis.
    for (int i = 0; i <= 5; ++i) {
        const double fy = y_min + (y_max - y_min) * i / 5.0;
        const double py = sy(fy);
        out << "  <line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(kRight)
            << "\" y2=\"" << fmt(py) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "  <text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << fmt(fy, "%.4g") << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 5.0;
        const double px = sx(fx);
        out << "  <line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kBottom) << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << fmt(kBottom + 5) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out << "  <text x=\"" << fmt(px) << "\" y=\"" << fmt(kBottom + 20)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
            << fmt(fx, "%.4g") << "</text>\n";
    }

    out << "  <line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(kBottom) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "  <line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kBottom) << "\" x2=\""
        << fmt(kRight) << "\" y2=\"" << fmt(kBottom) << "\" stroke=\"#333333\""
        << " stroke-width=\"1\"/>\n";
    out << "  <text x=\"" << fmt((kLeft + kRight) / 2) << "\" y=\"" << fmt(kHeight - 10)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
        << escape(x_label) << "</text>\n";
    out << "  <text x=\"16\" y=\"" << fmt((kTop + kBottom) / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\""
        << " transform=\"rotate(-90 16 " << fmt((kTop + kBottom) / 2) << ")\">"
        << escape(y_label) << "</text>\n";

    std::size_t color = 0;
    for (const auto& s : series) {
        out << "  <polyline fill=\"none\" stroke=\"" << kPalette[color % 8]
            << "\" stroke-width=\"1.5\" points=\"";
        bool sep = false;
        for (const auto& [px, py] : s.points) {
            if (sep) out << ' ';
            out << fmt(sx(px)) << ',' << fmt(sy(py));
            sep = true;
        }
        out << "\"/>\n";

        const double ly = kTop + 8 + 18.0 * static_cast<double>(color);
        out << "  <line x1=\"" << fmt(kRight + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\""
            << fmt(kRight + 34) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << kPalette[color % 8]
            << "\" stroke-width=\"1.5\"/>\n";
        out << "  <text x=\"" << fmt(kRight + 40) << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label)
            << "</text>\n";
        ++color;
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace dataflow
