// Standalone SVG heatmaps and line plots

#pragma once

#include "jch/entanglement.hpp"
#include "jch/io/csv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace jch::io {

struct Rgb {
    int r{0}, g{0}, b{0};

    std::string hex() const {
        char buf[8];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
        return buf;
    }
};

// Dark-to-bright ramp, piecewise linear through a few fixed stops.
inline Rgb ramp_color(double fraction) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {0.0, 0.0, 4.0},
        {87.0, 16.0, 110.0},
        {188.0, 55.0, 84.0},
        {249.0, 142.0, 9.0},
        {252.0, 255.0, 164.0},
    }};
    if (!(fraction > 0.0)) fraction = 0.0;
    if (fraction > 1.0) fraction = 1.0;
    const double pos = fraction * static_cast<double>(stops.size() - 1);
    const auto lo = std::min<std::size_t>(static_cast<std::size_t>(pos), stops.size() - 2);
    const double w = pos - static_cast<double>(lo);
    auto mix = [&](int c) {
        return static_cast<int>(std::lround(stops[lo][c] * (1.0 - w) + stops[lo + 1][c] * w));
    };
    return {mix(0), mix(1), mix(2)};
}

namespace detail {

inline std::string fmt(double v, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
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

inline void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("svg: cannot open '" + path.string() + "' for writing");
    os << text;
    if (!os) throw IoError("svg: write to '" + path.string() + "' failed");
}

// Roughly five ticks on 1..n, always including both ends.
inline std::vector<int> site_ticks(int n) {
    std::vector<int> ticks{1};
    const int step = std::max(1, static_cast<int>(std::lround(n / 5.0)));
    for (int t = step; t < n; t += step) {
        if (t > 1 && n - t >= step / 2) ticks.push_back(t);
    }
    if (n > 1) ticks.push_back(n);
    return ticks;
}

} // namespace detail

// Cell (i, j) is drawn at column j, row i (row 1 at the top). Values at or above
// scale_max take the brightest colour.
inline std::string heatmap_svg(const ConcurrenceMap& map, double scale_max = 0.25,
                               const std::string& title = "") {
    if (!(scale_max > 0.0)) throw std::invalid_argument("heatmap_svg: scale_max must be > 0");
    const int n = map.size();
    const double cell = std::max(2.0, 600.0 / std::max(n, 1));
    const double grid = cell * n;
    const double left = 60.0, top = title.empty() ? 20.0 : 40.0;
    const double bar_x = left + grid + 30.0, bar_w = 20.0;
    const double width = bar_x + bar_w + 70.0, height = top + grid + 50.0;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(width) << "\" height=\""
       << detail::fmt(height) << "\" viewBox=\"0 0 " << detail::fmt(width) << ' ' << detail::fmt(height)
       << "\" shape-rendering=\"crispEdges\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << detail::fmt(width) << "\" height=\"" << detail::fmt(height)
       << "\" fill=\"#ffffff\"/>\n";
    if (!title.empty()) {
        os << "<text x=\"" << detail::fmt(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
           << detail::xml_escape(title) << "</text>\n";
    }

    os << "<g id=\"cells\">\n";
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const auto color = ramp_color(map(i, j) / scale_max);
            os << "<rect data-i=\"" << i << "\" data-j=\"" << j << "\" x=\"" << detail::fmt(left + (j - 1) * cell)
               << "\" y=\"" << detail::fmt(top + (i - 1) * cell) << "\" width=\"" << detail::fmt(cell)
               << "\" height=\"" << detail::fmt(cell) << "\" fill=\"" << color.hex() << "\"/>\n";
        }
    }
    os << "</g>\n";

    os << "<g id=\"axes\" font-family=\"sans-serif\" font-size=\"10\">\n";
    for (const int t : detail::site_ticks(n)) {
        const double c = (t - 0.5) * cell;
        os << "<text x=\"" << detail::fmt(left + c) << "\" y=\"" << detail::fmt(top + grid + 14)
           << "\" text-anchor=\"middle\">" << t << "</text>\n";
        os << "<text x=\"" << detail::fmt(left - 4) << "\" y=\"" << detail::fmt(top + c + 3)
           << "\" text-anchor=\"end\">" << t << "</text>\n";
    }
    os << "<text x=\"" << detail::fmt(left + grid / 2) << "\" y=\"" << detail::fmt(top + grid + 32)
       << "\" text-anchor=\"middle\">site j</text>\n";
    os << "<text x=\"16\" y=\"" << detail::fmt(top + grid / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << detail::fmt(top + grid / 2) << ")\">site i</text>\n";
    os << "</g>\n";

    constexpr int bar_steps = 64;
    const double step_h = grid / bar_steps;
    os << "<g id=\"colorbar\" font-family=\"sans-serif\" font-size=\"10\">\n";
    for (int s = 0; s < bar_steps; ++s) {
        const double frac = (s + 0.5) / bar_steps;
        os << "<rect x=\"" << detail::fmt(bar_x) << "\" y=\"" << detail::fmt(top + grid - (s + 1) * step_h)
           << "\" width=\"" << detail::fmt(bar_w) << "\" height=\"" << detail::fmt(step_h) << "\" fill=\""
           << ramp_color(frac).hex() << "\"/>\n";
    }
    os << "<text x=\"" << detail::fmt(bar_x + bar_w + 4) << "\" y=\"" << detail::fmt(top + grid)
       << "\">0</text>\n";
    os << "<text x=\"" << detail::fmt(bar_x + bar_w + 4) << "\" y=\"" << detail::fmt(top + 8) << "\">"
       << detail::fmt(scale_max) << "</text>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

inline void render_heatmap_svg(const ConcurrenceMap& map, double scale_max, const std::filesystem::path& path,
                               const std::string& title = "") {
    detail::write_text(heatmap_svg(map, scale_max, title), path);
}

struct LineSeries {
    std::string name;
    std::vector<double> y;
};

inline std::string line_plot_svg(const std::vector<double>& x, const std::vector<LineSeries>& lines,
                                 const std::string& x_label, const std::string& title = "") {
    static const std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                                    "#8c564b"};
    const double w = 720.0, h = 420.0, left = 70.0, right = 160.0, top = 40.0, bottom = 50.0;
    const double pw = w - left - right, ph = h - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    for (const double v : x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const auto& l : lines) {
        if (l.y.size() != x.size()) throw std::invalid_argument("line_plot_svg: series length mismatch");
        for (const double v : l.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    }
    if (x.empty()) { xmin = 0.0; xmax = 1.0; }
    if (!(ymax > ymin)) { ymin = std::isfinite(ymin) ? ymin - 0.5 : 0.0; ymax = ymin + 1.0; }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return top + ph - (v - ymin) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
       << w << ' ' << h << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
    if (!title.empty()) {
        os << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
           << detail::xml_escape(title) << "</text>\n";
    }
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 4.0;
        const double yv = ymin + (ymax - ymin) * t / 4.0;
        os << "<text x=\"" << detail::fmt(px(xv)) << "\" y=\"" << detail::fmt(top + ph + 14)
           << "\" text-anchor=\"middle\">" << detail::fmt(xv, "%.4g") << "</text>\n";
        os << "<text x=\"" << detail::fmt(left - 4) << "\" y=\"" << detail::fmt(py(yv) + 3)
           << "\" text-anchor=\"end\">" << detail::fmt(yv, "%.4g") << "</text>\n";
    }
    os << "<text x=\"" << detail::fmt(left + pw / 2) << "\" y=\"" << detail::fmt(h - 12)
       << "\" text-anchor=\"middle\">" << detail::xml_escape(x_label) << "</text>\n";
    os << "</g>\n";

    for (std::size_t k = 0; k < lines.size(); ++k) {
        const char* color = palette[k % palette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) os << ' ';
            os << detail::fmt(px(x[i]), "%.2f") << ',' << detail::fmt(py(lines[k].y[i]), "%.2f");
        }
        os << "\"/>\n";
        const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
        os << "<line x1=\"" << detail::fmt(left + pw + 12) << "\" y1=\"" << detail::fmt(ly - 4) << "\" x2=\""
           << detail::fmt(left + pw + 32) << "\" y2=\"" << detail::fmt(ly - 4) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << detail::fmt(left + pw + 36) << "\" y=\"" << detail::fmt(ly)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << detail::xml_escape(lines[k].name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline void render_line_plot_svg(const std::vector<double>& x, const std::vector<LineSeries>& lines,
                                 const std::string& x_label, const std::filesystem::path& path,
                                 const std::string& title = "") {
    detail::write_text(line_plot_svg(x, lines, x_label, title), path);
}

inline std::string series_plot_svg(const ObservableSeries& series, const std::string& title = "") {
    std::vector<LineSeries> lines{{"S", series.entropy}, {"Pi_a", series.pi_a}};
    for (std::size_t p = 0; p < series.pairs.size(); ++p) {
        lines.push_back({"C_" + std::to_string(series.pairs[p].first) + "_" + std::to_string(series.pairs[p].second),
                         series.concurrence[p]});
    }
    return line_plot_svg(series.times, lines, "t J", title);
}

} // namespace jch::io
