#include "genlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "genlab/errors.hpp"

namespace genlab {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

// round limits outward to "nice" tick values: 1, 2, 5 times a power of ten
std::vector<double> ticks(double lo, double hi, std::size_t target = 6) {
    if (!(hi > lo)) {
        hi = lo + 1.0;
        lo -= 1.0;
    }
    const double raw = (hi - lo) / static_cast<double>(target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0})
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    std::vector<double> out;
    double t = std::ceil(lo / step) * step;
    for (; t <= hi + 0.5 * step; t += step) out.push_back(t == 0.0 ? 0.0 : t);
    return out;
}

}  // namespace

std::string SvgPlot::render() const {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const SvgSeries& s : series) {
        if (s.x.size() != s.y.size())
            throw InvalidInput("SvgPlot: series x/y length mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double yv = s.y[i];
            if (log_y) {
                if (!(yv > 0.0)) continue;  // log axis skips non-positive values
                yv = std::log10(yv);
            }
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = ymin = 0.0;
        xmax = ymax = 1.0;
    }
    if (diagonal) {
        const double lo = std::min(xmin, ymin), hi = std::max(xmax, ymax);
        xmin = ymin = lo;
        xmax = ymax = hi;
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pad_x = 0.05 * (xmax - xmin), pad_y = 0.05 * (ymax - ymin);
    xmin -= pad_x;
    xmax += pad_x;
    ymin -= pad_y;
    ymax += pad_y;

    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double W = static_cast<double>(width), H = static_cast<double>(height);
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) {
        if (log_y) y = std::log10(y);
        return mt + (ymax - y) / (ymax - ymin) * ph;
    };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n"
      << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    o << "<text x=\"" << fmt(W / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";
    o << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(H - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(x_label) << "</text>\n";
    o << "<text x=\"16\" y=\"" << fmt(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << fmt(mt + ph / 2) << ")\">" << escape(y_label)
      << (log_y ? " (log10)" : "") << "</text>\n";

    for (double t : ticks(xmin, xmax)) {
        const double x = px(t);
        o << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(x)
          << "\" y2=\"" << fmt(mt + ph + 5) << "\" stroke=\"#333\"/>\n"
          << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(mt + ph + 18)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
          << fmt(t) << "</text>\n";
    }
    for (double t : ticks(ymin, ymax)) {
        const double y = mt + (ymax - t) / (ymax - ymin) * ph;
        o << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(ml)
          << "\" y2=\"" << fmt(y) << "\" stroke=\"#333\"/>\n"
          << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(y + 3)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(t)
          << "</text>\n";
    }

    if (diagonal) {
        o << "<line x1=\"" << fmt(px(xmin)) << "\" y1=\""
          << fmt(mt + (ymax - xmin) / (ymax - ymin) * ph) << "\" x2=\"" << fmt(px(xmax))
          << "\" y2=\"" << fmt(mt + (ymax - xmax) / (ymax - ymin) * ph)
          << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    }

    std::size_t legend_row = 0;
    for (const SvgSeries& s : series) {
        if (s.line && s.x.size() > 1) {
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
            bool first = true;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (log_y && !(s.y[i] > 0.0)) continue;
                if (!first) o << " ";
                o << fmt(px(s.x[i])) << "," << fmt(py(s.y[i]));
                first = false;
            }
            o << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (log_y && !(s.y[i] > 0.0)) continue;
            o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
              << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        }
        if (!s.name.empty()) {
            const double ly = mt + 14 + 16 * static_cast<double>(legend_row++);
            o << "<circle cx=\"" << fmt(ml + pw - 110) << "\" cy=\"" << fmt(ly - 4)
              << "\" r=\"3\" fill=\"" << s.color << "\"/>\n"
              << "<text x=\"" << fmt(ml + pw - 100) << "\" y=\"" << fmt(ly)
              << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.name)
              << "</text>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

void SvgPlot::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("SvgPlot::save: cannot open " + path);
    out << render();
}

}  // namespace genlab
