#include "pwband/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pwband {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 40.0;

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void finish() {
        if (!(lo <= hi)) { lo = 0.0, hi = 1.0; }
        if (hi - lo < 1e-12) { lo -= 0.5, hi += 0.5; }
    }
};

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

void header(std::ostringstream &os, const std::string &title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << escape(title) << "</text>\n";
}

void axes(std::ostringstream &os, const Range &yr) {
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
       << kHeight - kBottom << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        const double y = kHeight - kBottom - (kHeight - kTop - kBottom) * i / 4.0;
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           << "font-size=\"11\">" << v << "</text>\n";
    }
}

}  // namespace

std::string line_chart_svg(const std::string &title, const std::vector<SvgSeries> &series) {
    Range xr;
    Range yr;
    for (const auto &s : series) {
        for (double v : s.x) { xr.add(v); }
        for (double v : s.y) { yr.add(v); }
    }
    xr.finish();
    yr.finish();
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - kLeft - kRight); };
    auto py = [&](double y) { return kHeight - kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom); };

    std::ostringstream os;
    os.precision(6);
    header(os, title);
    axes(os, yr);
    os << "<text x=\"" << kLeft << "\" y=\"" << kHeight - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">" << xr.lo
       << "</text>\n<text x=\"" << kWidth - kRight << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << xr.hi << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto &s = series[k];
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
                   << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"" << points << "\"/>\n";
                points.clear();
            }
        };
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            std::ostringstream p;
            p.precision(6);
            p << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            points += p.str();
        }
        flush();
        os << "<text x=\"" << kWidth - kRight - 150 << "\" y=\"" << kTop + 14 * (k + 1) << "\" fill=\"" << s.color
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string box_plot_svg(const std::string &title, const std::vector<SvgBox> &boxes) {
    Range yr;
    for (const auto &b : boxes) {
        yr.add(b.whisker_lo);
        yr.add(b.whisker_hi);
    }
    yr.finish();
    auto py = [&](double y) { return kHeight - kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom); };
    std::ostringstream os;
    os.precision(6);
    header(os, title);
    axes(os, yr);
    const double slot = (kWidth - kLeft - kRight) / static_cast<double>(std::max<std::size_t>(boxes.size(), 1));
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const auto &b = boxes[i];
        const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        const double half = slot * 0.3;
        os << "<line x1=\"" << cx << "\" y1=\"" << py(b.whisker_lo) << "\" x2=\"" << cx << "\" y2=\"" << py(b.whisker_hi)
           << "\" stroke=\"black\"/>\n"
           << "<rect x=\"" << cx - half << "\" y=\"" << py(b.q3) << "\" width=\"" << 2 * half << "\" height=\""
           << std::max(0.0, py(b.q1) - py(b.q3)) << "\" fill=\"#cfe0f3\" stroke=\"black\"/>\n"
           << "<line x1=\"" << cx - half << "\" y1=\"" << py(b.median) << "\" x2=\"" << cx + half << "\" y2=\""
           << py(b.median) << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << cx << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           << "font-size=\"11\">" << escape(b.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace pwband
