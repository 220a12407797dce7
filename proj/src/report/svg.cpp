#include "bulbar/report/svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bulbar/core/fileio.hpp"
#include "bulbar/error.hpp"

namespace bulbar::report {

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 60.0;
constexpr double kPlot = kSize - 2.0 * kMargin;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

}  // namespace

std::string scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title) {
    if (points.empty()) throw ValidationError("scatter plot needs at least one point");
    double lo = 5.0, hi = 25.0;
    for (const auto& p : points) {
        if (!std::isfinite(p.y_true) || !std::isfinite(p.y_pred)) {
            throw ValidationError("scatter plot point is not finite");
        }
        lo = std::min({lo, std::floor(p.y_true), std::floor(p.y_pred)});
        hi = std::max({hi, std::ceil(p.y_true), std::ceil(p.y_pred)});
    }
    const double span = hi - lo;
    auto px = [&](double v) { return kMargin + (v - lo) / span * kPlot; };
    auto py = [&](double v) { return kMargin + kPlot - (v - lo) / span * kPlot; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n", kSize);
    svg += fmt::format("<title>{}</title>\n", escape(title));
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n", kSize);
    svg += fmt::format("<text x=\"{:.3f}\" y=\"30\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       kSize / 2.0, escape(title));
    svg += fmt::format("<path class=\"axis\" d=\"M {0:.3f} {1:.3f} L {0:.3f} {2:.3f} L {3:.3f} {2:.3f}\" "
                       "fill=\"none\" stroke=\"black\"/>\n",
                       kMargin, kMargin, kMargin + kPlot, kMargin + kPlot);
    const int step = span > 30.0 ? 10 : 5;
    for (int v = static_cast<int>(std::ceil(lo / step)) * step; v <= hi; v += step) {
        svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n",
                           px(v), kMargin + kPlot + 16.0, v);
        svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"end\" font-size=\"11\">{}</text>\n",
                           kMargin - 6.0, py(v) + 4.0, v);
    }
    svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" text-anchor=\"middle\" font-size=\"12\">"
                       "True score ({:g}-{:g})</text>\n",
                       kSize / 2.0, kSize - 18.0, lo, hi);
    svg += fmt::format("<text x=\"18\" y=\"{0:.3f}\" text-anchor=\"middle\" font-size=\"12\" "
                       "transform=\"rotate(-90 18 {0:.3f})\">Predicted score ({1:g}-{2:g})</text>\n",
                       kSize / 2.0, lo, hi);
    svg += fmt::format("<line class=\"identity\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" "
                       "stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n",
                       px(lo), py(lo), px(hi), py(hi));
    for (const auto& p : points) {
        svg += fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.7\"/>\n",
                           px(p.y_true), py(p.y_pred), p.group == Group::ALS ? kAlsColor : kHcColor);
    }
    svg += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"8\" height=\"8\" fill=\"{}\"/>\n",
                       kMargin + 10.0, kMargin + 6.0, kAlsColor);
    svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" font-size=\"11\">ALS</text>\n", kMargin + 22.0, kMargin + 14.0);
    svg += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"8\" height=\"8\" fill=\"{}\"/>\n",
                       kMargin + 10.0, kMargin + 22.0, kHcColor);
    svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" font-size=\"11\">HC</text>\n", kMargin + 22.0, kMargin + 30.0);
    svg += "</svg>\n";
    return svg;
}

void write_scatter_svg(const std::vector<ScatterPoint>& points, const std::string& title,
                       const std::filesystem::path& path) {
    write_text_file(path, scatter_svg(points, title));
}

}  // namespace bulbar::report
