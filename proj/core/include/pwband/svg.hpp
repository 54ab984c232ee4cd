#pragma once

#include <string>
#include <vector>

namespace pwband {

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;  // NaN breaks the polyline
    bool dashed = false;
};

/// Line chart of several series with axes and a legend.
std::string line_chart_svg(const std::string &title, const std::vector<SvgSeries> &series);

struct SvgBox {
    std::string label;
    double whisker_lo = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_hi = 0.0;
};

/// Box plot with one box per entry.
std::string box_plot_svg(const std::string &title, const std::vector<SvgBox> &boxes);

}  // namespace pwband
