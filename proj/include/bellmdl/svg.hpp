#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bellmdl/errors.hpp"

// Native SVG 1.1 line charts: polylines with axis ticks and a legend. Data
// fidelity over presentation; no external plotting dependency.

namespace bellmdl {

/// One polyline. `color_index` selects from the fixed series palette
/// (black, blue, purple, magenta, cyan, green, yellow, orange, red).
struct FigureSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    int color_index = 0;
};

inline constexpr std::array<std::string_view, 9> kSeriesColors = {
    "black", "blue", "purple", "magenta", "cyan", "green", "yellow", "orange", "red",
};

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 920;
    int height = 560;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Tick step of the form {1, 2, 5} * 10^k giving roughly `target` intervals.
inline double nice_tick_step(double span, int target) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double nice = 10.0;
    if (frac <= 1.0) nice = 1.0;
    else if (frac <= 2.0) nice = 2.0;
    else if (frac <= 5.0) nice = 5.0;
    return nice * mag;
}

}  // namespace detail

/// Renders series as an SVG 1.1 document. Each series must have equal-length
/// x/y with strictly increasing x.
inline std::string render_line_chart(std::span<const FigureSeries> series,
                                     const ChartOptions& opt) {
    for (const FigureSeries& s : series) {
        if (s.x.size() != s.y.size())
            throw DomainError("render_line_chart: series '" + s.label +
                              "' has mismatched x/y lengths");
        for (std::size_t i = 1; i < s.x.size(); ++i) {
            if (!(s.x[i] > s.x[i - 1]))
                throw DomainError("render_line_chart: series '" + s.label +
                                  "' x values must be strictly increasing");
        }
    }

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min, y_min = x_min, y_max = -x_min;
    for (const FigureSeries& s : series) {
        for (double v : s.x) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
        for (double v : s.y) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
    }
    if (!(x_min < x_max)) { x_min -= 0.5; x_max += 0.5; }
    if (!(y_min < y_max)) { y_min -= 0.5; y_max += 0.5; }
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const int ml = 72, mr = 24, mt = 40, mb = 56;  // margins
    const double pw = opt.width - ml - mr;
    const double ph = opt.height - mt - mb;
    const auto px = [&](double x) { return ml + pw * (x - x_min) / (x_max - x_min); };
    const auto py = [&](double y) { return mt + ph * (y_max - y) / (y_max - y_min); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << opt.width << "\" height=\"" << opt.height << "\" viewBox=\"0 0 " << opt.width
        << " " << opt.height << "\">\n"
        << "<rect width=\"" << opt.width << "\" height=\"" << opt.height
        << "\" fill=\"white\"/>\n";
    if (!opt.title.empty()) {
        svg << "<text x=\"" << opt.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << opt.title << "</text>\n";
    }

    // axes box
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << detail::svg_num(pw)
        << "\" height=\"" << detail::svg_num(ph)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    const double xs = detail::nice_tick_step(x_max - x_min, 8);
    for (double t = std::ceil(x_min / xs) * xs; t <= x_max + 1e-12 * xs; t += xs) {
        const double gx = px(t);
        svg << "<line x1=\"" << detail::svg_num(gx) << "\" y1=\"" << mt + ph << "\" x2=\""
            << detail::svg_num(gx) << "\" y2=\"" << detail::svg_num(mt + ph + 5)
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << detail::svg_num(gx) << "\" y=\""
            << detail::svg_num(mt + ph + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::svg_num(t) << "</text>\n";
    }
    const double ys = detail::nice_tick_step(y_max - y_min, 6);
    for (double t = std::ceil(y_min / ys) * ys; t <= y_max + 1e-12 * ys; t += ys) {
        const double gy = py(t);
        svg << "<line x1=\"" << detail::svg_num(ml - 5.0) << "\" y1=\""
            << detail::svg_num(gy) << "\" x2=\"" << ml << "\" y2=\"" << detail::svg_num(gy)
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << detail::svg_num(ml - 9.0) << "\" y=\""
            << detail::svg_num(gy + 4.0)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::svg_num(t) << "</text>\n";
    }
    if (!opt.x_label.empty()) {
        svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 14
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
            << opt.x_label << "</text>\n";
    }
    if (!opt.y_label.empty()) {
        svg << "<text x=\"18\" y=\"" << mt + ph / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
            << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << opt.y_label
            << "</text>\n";
    }

    for (const FigureSeries& s : series) {
        const std::string_view color =
            kSeriesColors[static_cast<std::size_t>(s.color_index) % kSeriesColors.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i > 0) svg << ' ';
            svg << detail::svg_num(px(s.x[i])) << ',' << detail::svg_num(py(s.y[i]));
        }
        svg << "\"/>\n";
    }

    // legend, top-right inside the plot box
    double ly = mt + 16.0;
    for (const FigureSeries& s : series) {
        if (s.label.empty()) continue;
        const std::string_view color =
            kSeriesColors[static_cast<std::size_t>(s.color_index) % kSeriesColors.size()];
        svg << "<line x1=\"" << detail::svg_num(ml + pw - 120.0) << "\" y1=\""
            << detail::svg_num(ly - 4.0) << "\" x2=\"" << detail::svg_num(ml + pw - 96.0)
            << "\" y2=\"" << detail::svg_num(ly - 4.0) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << detail::svg_num(ml + pw - 90.0) << "\" y=\""
            << detail::svg_num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
        ly += 15.0;
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace bellmdl
