#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "genlab/errors.hpp"
#include "genlab/svg.hpp"

using namespace genlab;

namespace {

SvgPlot fixture_plot() {
    SvgPlot plot;
    plot.title = "fixture";
    plot.x_label = "x";
    plot.y_label = "y";
    SvgSeries s;
    s.name = "series-a";
    s.x = {1.0, 2.0, 3.0, 4.0};
    s.y = {0.5, 0.25, 0.125, 0.0625};
    s.line = true;
    plot.series.push_back(s);
    SvgSeries t;
    t.name = "series-b";
    t.x = {1.0, 2.0, 3.0};
    t.y = {0.1, 0.4, 0.2};
    t.color = "#b23a1f";
    plot.series.push_back(t);
    return plot;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace

TEST_CASE("empty plot renders axes only") {
    SvgPlot plot;
    plot.title = "empty";
    const std::string svg = plot.render();
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("circle") == std::string::npos);
    CHECK(svg.find("polyline") == std::string::npos);
}

TEST_CASE("one point yields exactly one marker") {
    SvgPlot plot;
    SvgSeries s;
    s.x = {1.0};
    s.y = {2.0};
    plot.series.push_back(s);
    const std::string svg = plot.render();
    CHECK(count_occurrences(svg, "<circle") == 1);
}

TEST_CASE("render is deterministic and escapes markup in text") {
    SvgPlot plot = fixture_plot();
    plot.title = "a < b & c";
    const std::string a = plot.render();
    const std::string b = plot.render();
    CHECK(a == b);
    CHECK(a.find("a &lt; b &amp; c") != std::string::npos);
    CHECK(a.find("a < b & c") == std::string::npos);
}

TEST_CASE("series length mismatch is rejected") {
    SvgPlot plot;
    SvgSeries s;
    s.x = {1.0, 2.0};
    s.y = {1.0};
    plot.series.push_back(s);
    CHECK_THROWS_AS(plot.render(), InvalidInput);
}

TEST_CASE("log scale skips non-positive values instead of failing") {
    SvgPlot plot;
    plot.log_y = true;
    SvgSeries s;
    s.x = {1.0, 2.0, 3.0};
    s.y = {0.0, 10.0, 100.0};
    plot.series.push_back(s);
    const std::string svg = plot.render();
    CHECK(count_occurrences(svg, "<circle") == 2);  // the zero is dropped
}

TEST_CASE("diagonal reference line appears for scatter comparisons") {
    SvgPlot plot = fixture_plot();
    plot.diagonal = true;
    const std::string svg = plot.render();
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("golden file byte comparison") {
    const std::string golden_path = std::string(GENLAB_TEST_DATA_DIR) + "/golden_plot.svg";
    const SvgPlot plot = fixture_plot();
    const std::string rendered = plot.render();
    const std::string golden = slurp(golden_path);
    REQUIRE_FALSE(golden.empty());
    CHECK(rendered == golden);
}

TEST_CASE("save writes the rendered bytes") {
    const SvgPlot plot = fixture_plot();
    plot.save("svg_unit.svg");
    CHECK(slurp("svg_unit.svg") == plot.render());
    std::remove("svg_unit.svg");
}
