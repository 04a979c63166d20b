#pragma once

// Minimal native SVG plotting: log-log axes, decade ticks, error bars,
// optional fitted-law overlay. Plots are derived artifacts; data files
// never depend on them.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace orwalk {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> yerr;  // optional, may be empty
    bool line = true;
    bool markers = true;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string tick_label(int decade) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "1e%d", decade);
    return buf;
}

}  // namespace detail

inline std::string render_loglog_svg(const std::string& title, const std::string& xlabel,
                                     const std::string& ylabel,
                                     const std::vector<PlotSeries>& series) {
    static const char* kColors[] = {"#1f6fb2", "#c23b22", "#2e8b57", "#8b5cf6", "#b8860b"};
    const double w = 720, h = 520, ml = 70, mr = 20, mt = 40, mb = 55;

    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (x_lo > x_hi || y_lo > y_hi) {
        x_lo = y_lo = 0.1;
        x_hi = y_hi = 10.0;
    }
    const double lx0 = std::floor(std::log10(x_lo)), lx1 = std::ceil(std::log10(x_hi) + 1e-12);
    const double ly0 = std::floor(std::log10(y_lo)), ly1 = std::ceil(std::log10(y_hi) + 1e-12);
    auto px = [&](double x) {
        return ml + (std::log10(x) - lx0) / std::max(lx1 - lx0, 1e-12) * (w - ml - mr);
    };
    auto py = [&](double y) {
        return h - mb - (std::log10(y) - ly0) / std::max(ly1 - ly0, 1e-12) * (h - mt - mb);
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(w) +
           "\" height=\"" + detail::svg_num(h) + "\" viewBox=\"0 0 " + detail::svg_num(w) + " " +
           detail::svg_num(h) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + detail::svg_num(w / 2) + "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + title + "</text>\n";

    // frame
    out += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) + "\" width=\"" +
           detail::svg_num(w - ml - mr) + "\" height=\"" + detail::svg_num(h - mt - mb) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";

    // decade grid + labels
    for (int dec = static_cast<int>(lx0); dec <= static_cast<int>(lx1); ++dec) {
        const double x = px(std::pow(10.0, dec));
        out += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(mt) +
               "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(h - mb) +
               "\" stroke=\"#ddd\"/>\n";
        out += "<text x=\"" + detail::svg_num(x) + "\" y=\"" + detail::svg_num(h - mb + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::tick_label(dec) + "</text>\n";
    }
    for (int dec = static_cast<int>(ly0); dec <= static_cast<int>(ly1); ++dec) {
        const double y = py(std::pow(10.0, dec));
        out += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(y) +
               "\" x2=\"" + detail::svg_num(w - mr) + "\" y2=\"" + detail::svg_num(y) +
               "\" stroke=\"#ddd\"/>\n";
        out += "<text x=\"" + detail::svg_num(ml - 8) + "\" y=\"" + detail::svg_num(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::tick_label(dec) + "</text>\n";
    }
    out += "<text x=\"" + detail::svg_num(w / 2) + "\" y=\"" + detail::svg_num(h - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + xlabel +
           "</text>\n";
    out += "<text x=\"16\" y=\"" + detail::svg_num(h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " + detail::svg_num(h / 2) + ")\">" + ylabel + "</text>\n";

    // series
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kColors[si % 5];
        if (s.line) {
            std::string pts;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
                pts += detail::svg_num(px(s.x[i])) + "," + detail::svg_num(py(s.y[i])) + " ";
            }
            out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            const double cx = px(s.x[i]), cy = py(s.y[i]);
            if (i < s.yerr.size() && s.yerr[i] > 0.0) {
                const double hi = s.y[i] + s.yerr[i];
                const double lo = std::max(s.y[i] - s.yerr[i], 1e-300);
                out += "<line x1=\"" + detail::svg_num(cx) + "\" y1=\"" +
                       detail::svg_num(py(lo)) + "\" x2=\"" + detail::svg_num(cx) + "\" y2=\"" +
                       detail::svg_num(py(hi)) + "\" stroke=\"" + color + "\"/>\n";
            }
            if (s.markers)
                out += "<circle cx=\"" + detail::svg_num(cx) + "\" cy=\"" + detail::svg_num(cy) +
                       "\" r=\"2.2\" fill=\"" + color + "\"/>\n";
        }
        out += "<text x=\"" + detail::svg_num(w - mr - 10) + "\" y=\"" +
               detail::svg_num(mt + 18 + 16 * static_cast<double>(si)) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
               color + "\">" + s.label + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace orwalk
