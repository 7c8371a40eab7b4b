#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace genlab {

// Minimal deterministic SVG 1.1 plot writer. One numeric series per call;
// output bytes depend only on the inputs.
struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
    bool line = false;  // connect points in order; markers are always drawn
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    bool log_y = false;
    bool diagonal = false;  // draw the y = x reference line
    std::size_t width = 640;
    std::size_t height = 480;

    std::string render() const;
    void save(const std::string& path) const;
};

}  // namespace genlab
