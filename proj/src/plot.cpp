#include "skewrec/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

#include "skewrec/csv.hpp"

namespace skewrec {

namespace {

// Fixed two-decimal formatting keeps the output byte-deterministic across
// platforms (iostream float formatting is locale-sensitive).
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 62, kRight = 608, kTop = 24, kBottom = 372;

} // namespace

std::string plot_profile_svg(const std::string& csv_text) {
    auto rows = profile_from_csv(csv_text);

    std::map<std::int64_t, std::vector<std::pair<std::int64_t, double>>> series;
    std::int64_t n_min = 0, n_max = 0;
    bool any = false;
    for (const auto& row : rows) {
        series[row.m].push_back({row.n, row.measure.to_double()});
        if (!any || row.n < n_min) n_min = row.n;
        if (!any || row.n > n_max) n_max = row.n;
        any = true;
    }
    for (auto& [m, pts] : series)
        std::sort(pts.begin(), pts.end());
    if (!any) { n_min = 0; n_max = 1; }
    if (n_min == n_max) { --n_min; ++n_max; }

    auto xpos = [&](double n) {
        return kLeft + (n - (double)n_min) / ((double)n_max - (double)n_min) * (kRight - kLeft);
    };
    auto ypos = [&](double v) { return kBottom - v * (kBottom - kTop); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    // Axes and gridlines. The measure axis is always [0, 1].
    for (int i = 0; i <= 4; ++i) {
        double v = i / 4.0;
        double y = ypos(v);
        svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kRight)
            << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << fmt(v)
            << "</text>\n";
    }
    std::int64_t span = n_max - n_min;
    std::int64_t step = std::max<std::int64_t>(1, (span + 7) / 8);
    for (std::int64_t n = n_min; n <= n_max; n += step) {
        double x = xpos((double)n);
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kBottom) << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << fmt(kBottom + 5) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kBottom + 18)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << n
            << "</text>\n";
    }
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(kBottom) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kBottom) << "\" x2=\""
        << fmt(kRight) << "\" y2=\"" << fmt(kBottom) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt((kLeft + kRight) / 2) << "\" y=\"" << fmt(kHeight - 8)
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">n</text>\n";
    svg << "<text x=\"16\" y=\"" << fmt((kTop + kBottom) / 2)
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 16 " << fmt((kTop + kBottom) / 2)
        << ")\">measure</text>\n";

    int idx = 0;
    for (const auto& [m, pts] : series) {
        const char* color = kPalette[idx % kPaletteSize];
        if (pts.size() > 1) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (i) svg << " ";
                svg << fmt(xpos((double)pts[i].first)) << "," << fmt(ypos(pts[i].second));
            }
            svg << "\"/>\n";
        }
        for (const auto& [n, v] : pts)
            svg << "<circle cx=\"" << fmt(xpos((double)n)) << "\" cy=\"" << fmt(ypos(v))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        double ly = kTop + 8 + 18.0 * idx;
        svg << "<rect x=\"" << fmt(kRight - 110) << "\" y=\"" << fmt(ly - 9)
            << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << fmt(kRight - 92) << "\" y=\"" << fmt(ly + 2)
            << "\" font-family=\"sans-serif\" font-size=\"12\">m = " << m << "</text>\n";
        ++idx;
    }

    svg << "</svg>\n";
    return svg.str();
}

} // namespace skewrec
