#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vtrack/eval.hpp"

namespace vtrack::cli {

namespace {

constexpr double kW = 640.0;
constexpr double kH = 400.0;
constexpr double kMargin = 50.0;

std::string fmt(const char* pattern, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, a);
    return buf;
}

std::string header(const std::string& title) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kW) + "\" height=\"" +
                    fmt("%.0f", kH) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt("%.1f", kW / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + title +
         "</text>\n";
    return s;
}

std::string line(double x1, double y1, double x2, double y2, const char* stroke, double width = 1.0) {
    return "<line x1=\"" + fmt("%.2f", x1) + "\" y1=\"" + fmt("%.2f", y1) + "\" x2=\"" + fmt("%.2f", x2) +
           "\" y2=\"" + fmt("%.2f", y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt("%.1f", width) +
           "\"/>\n";
}

struct Range {
    double lo;
    double hi;

    void pad() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
    double to_y(double v) const { return kH - kMargin - (v - lo) / (hi - lo) * (kH - 2 * kMargin); }
};

std::string y_axis(const Range& r) {
    std::string s = line(kMargin, kMargin, kMargin, kH - kMargin, "black");
    for (int i = 0; i <= 4; ++i) {
        const double v = r.lo + (r.hi - r.lo) * i / 4.0;
        const double y = r.to_y(v);
        s += line(kMargin - 4, y, kMargin, y, "black");
        s += "<text x=\"" + fmt("%.1f", kMargin - 6) + "\" y=\"" + fmt("%.1f", y + 4) +
             "\" text-anchor=\"end\">" + fmt("%.2f", v) + "</text>\n";
    }
    return s;
}

}  // namespace

std::string boxplot_svg(std::span<const BoxSeries> series, const std::string& title) {
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& s : series)
        for (double v : s.values) {
            r.lo = std::min(r.lo, v);
            r.hi = std::max(r.hi, v);
        }
    if (!std::isfinite(r.lo)) r = {0.0, 1.0};
    r.pad();

    std::string svg = header(title) + y_axis(r);
    const double slot = (kW - 2 * kMargin) / static_cast<double>(std::max<std::size_t>(1, series.size()));
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double cx = kMargin + slot * (static_cast<double>(i) + 0.5);
        const double half = std::min(40.0, slot * 0.3);
        svg += "<text x=\"" + fmt("%.1f", cx) + "\" y=\"" + fmt("%.1f", kH - kMargin + 18) +
               "\" text-anchor=\"middle\">" + series[i].label + "</text>\n";
        if (series[i].values.empty()) continue;
        const auto st = distribution_stats(series[i].values);
        svg += line(cx, r.to_y(st.whisker_low), cx, r.to_y(st.q1), "black");
        svg += line(cx, r.to_y(st.q3), cx, r.to_y(st.whisker_high), "black");
        svg += line(cx - half / 2, r.to_y(st.whisker_low), cx + half / 2, r.to_y(st.whisker_low), "black");
        svg += line(cx - half / 2, r.to_y(st.whisker_high), cx + half / 2, r.to_y(st.whisker_high), "black");
        svg += "<rect x=\"" + fmt("%.2f", cx - half) + "\" y=\"" + fmt("%.2f", r.to_y(st.q3)) + "\" width=\"" +
               fmt("%.2f", 2 * half) + "\" height=\"" + fmt("%.2f", r.to_y(st.q1) - r.to_y(st.q3)) +
               "\" fill=\"#cfe0f3\" stroke=\"black\"/>\n";
        svg += line(cx - half, r.to_y(st.median), cx + half, r.to_y(st.median), "#c0392b", 2.0);
        for (double o : st.outliers)
            svg += "<circle cx=\"" + fmt("%.2f", cx) + "\" cy=\"" + fmt("%.2f", r.to_y(o)) +
                   "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";
    }
    return svg + "</svg>\n";
}

std::string width_overlay_svg(std::span<const double> reference, std::span<const double> estimate,
                              std::uint64_t segment_id) {
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (auto s : {reference, estimate})
        for (double v : s) {
            r.lo = std::min(r.lo, v);
            r.hi = std::max(r.hi, v);
        }
    if (!std::isfinite(r.lo)) r = {0.0, 1.0};
    r.pad();

    auto polyline = [&](std::span<const double> v, const char* colour) {
        std::string pts;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = kMargin + (kW - 2 * kMargin) * static_cast<double>(i) /
                                           static_cast<double>(std::max<std::size_t>(1, v.size() - 1));
            pts += fmt("%.2f", x) + "," + fmt("%.2f", r.to_y(v[i])) + " ";
        }
        return "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + pts +
               "\"/>\n";
    };

    std::string svg = header("segment " + std::to_string(segment_id) + ": width (px) vs normalised arc length");
    svg += y_axis(r);
    svg += line(kMargin, kH - kMargin, kW - kMargin, kH - kMargin, "black");
    svg += polyline(reference, "black");
    svg += polyline(estimate, "#c0392b");
    svg += "<text x=\"" + fmt("%.1f", kW - kMargin) + "\" y=\"40\" text-anchor=\"end\">reference (black), "
           "estimate (red)</text>\n";
    return svg + "</svg>\n";
}

}  // namespace vtrack::cli
