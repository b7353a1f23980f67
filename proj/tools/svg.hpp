// Minimal static SVG rendering of non-recovery curves. The CSV output is the
// normative artifact; this is a convenience for eyeballing.
#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ptcure::cli {

struct CurveData {
    std::string label;
    std::vector<std::pair<double, double>> points; // (t, probability)
};

inline void write_curves_svg(std::ostream& out, const std::vector<CurveData>& curves,
                             double horizon) {
    constexpr int width = 720;
    constexpr int height = 480;
    constexpr int left = 60;
    constexpr int right = 24;
    constexpr int top = 24;
    constexpr int bottom = 48;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

    auto px = [&](double t) { return left + plot_w * (horizon > 0 ? t / horizon : 0.0); };
    auto py = [&](double p) { return top + plot_h * (1.0 - p); };
    char buf[128];

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes and grid.
    for (int i = 0; i <= 5; ++i) {
        const double p = i / 5.0;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%d\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n",
                      left, py(p), left + plot_w, py(p));
        out << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%.1f\" font-size=\"12\" text-anchor=\"end\">%.1f</text>\n",
                      left - 6, py(p) + 4, p);
        out << buf;
    }
    const double tick = horizon > 48 ? 12.0 : 6.0;
    for (double t = 0.0; t <= horizon + 1e-9; t += tick) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n",
                      px(t), top, px(t), top + plot_h);
        out << buf;
        std::snprintf(
            buf, sizeof(buf),
            "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\">%g</text>\n",
            px(t), top + plot_h + 16, t);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\">months since "
                  "default</text>\n",
                  left + plot_w / 2, height - 10);
    out << buf;

    // One polyline per group plus a legend entry.
    int color = 0;
    double legend_y = top + 16;
    for (const CurveData& c : curves) {
        const char* stroke = palette[color % 8];
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [t, p] : c.points) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(t), py(p));
            out << buf;
        }
        out << "\"/>\n";
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"14\" height=\"3\" fill=\"%s\"/>\n",
                      left + plot_w - 150.0, legend_y - 4, stroke);
        out << buf;
        out << "<text x=\"" << left + plot_w - 130 << "\" y=\"" << legend_y
            << "\" font-size=\"12\">" << c.label << "</text>\n";
        legend_y += 16;
        ++color;
    }
    out << "</svg>\n";
}

} // namespace ptcure::cli
