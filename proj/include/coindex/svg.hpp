#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "coindex/csv.hpp"
#include "coindex/errors.hpp"

namespace coindex {

struct PlotOptions {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    int width = 800;
    int height = 500;
};

// Standalone SVG with a frame, axis labels, min/max tick annotations and a
// single polyline. Output is byte-deterministic for a given series.
inline std::string render_polyline_svg(const std::vector<std::pair<double, double>>& series,
                                       const PlotOptions& opt = {}) {
    if (series.empty())
        throw DataError("empty curve");

    double xmin = series[0].first, xmax = series[0].first;
    double ymin = series[0].second, ymax = series[0].second;
    for (const auto& [x, y] : series) {
        xmin = std::min(xmin, x); xmax = std::max(xmax, x);
        ymin = std::min(ymin, y); ymax = std::max(ymax, y);
    }
    if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
    if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }

    const double ml = 70, mr = 20, mt = opt.title.empty() ? 20 : 40, mb = 50;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };
    auto num = [](double v) { return csv::format_double(v); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
         "\" height=\"" + std::to_string(opt.height) + "\" viewBox=\"0 0 " +
         std::to_string(opt.width) + " " + std::to_string(opt.height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        s += "<text x=\"" + num(ml + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" "
             "font-family=\"sans-serif\" font-size=\"16\">" + opt.title + "</text>\n";
    s += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(opt.height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         opt.x_label + "</text>\n";
    s += "<text x=\"16\" y=\"" + num(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " + num(mt + ph / 2) + ")\">" + opt.y_label + "</text>\n";
    // corner tick labels
    s += "<text x=\"" + num(ml) + "\" y=\"" + num(opt.height - 32) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + num(xmin) + "</text>\n";
    s += "<text x=\"" + num(ml + pw) + "\" y=\"" + num(opt.height - 32) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + num(xmax) +
         "</text>\n";
    s += "<text x=\"" + num(ml - 4) + "\" y=\"" + num(mt + ph) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + num(ymin) +
         "</text>\n";
    s += "<text x=\"" + num(ml - 4) + "\" y=\"" + num(mt + 10) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + num(ymax) +
         "</text>\n";

    s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < series.size(); ++i) {
        if (i) s += " ";
        s += num(px(series[i].first)) + "," + num(py(series[i].second));
    }
    s += "\"/>\n</svg>\n";
    return s;
}

// Reads (x, y) pairs out of a curve CSV written by the tools; picks two
// columns, skips a header row if present.
inline std::vector<std::pair<double, double>> load_curve(const std::string& path,
                                                         size_t x_col = 0, size_t y_col = 1) {
    const csv::Table t = csv::read_table(path);
    std::vector<std::pair<double, double>> out;
    for (const auto& r : t.rows) {
        if (x_col >= r.size() || y_col >= r.size())
            throw DataError("curve file row too short: " + path);
        auto x = csv::parse_double(r[x_col]);
        auto y = csv::parse_double(r[y_col]);
        if (!x || !y)
            throw DataError("bad curve value in " + path);
        out.emplace_back(*x, *y);
    }
    if (out.empty())
        throw DataError("empty curve");
    return out;
}

} // namespace coindex
