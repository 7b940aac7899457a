#include "powerloop/svg.hpp"

#include "powerloop/csvio.hpp"
#include "powerloop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace powerloop {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#ff7f0e", "#9467bd", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string esc(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_text(double v) {
    // Snap tiny residue from step accumulation before printing.
    if (std::abs(v) < 1e-12) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

double nice_step(double range, int target_ticks) {
    const double raw = range / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (const double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= mult * mag * (1.0 + 1e-12)) return mult * mag;
    }
    return 10.0 * mag;
}

struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
};

Bounds padded(double lo, double hi) {
    if (!(lo <= hi)) return {0.0, 1.0};
    if (lo == hi) return {lo - 0.5, hi + 0.5};
    const double pad = 0.04 * (hi - lo);
    return {lo - pad, hi + pad};
}

} // namespace

std::string render_svg(const PlotSpec& spec) {
    const double ml = 64.0, mr = 18.0, mt = 40.0, mb = 48.0;
    const double w = static_cast<double>(spec.width);
    const double h = static_cast<double>(spec.height);
    const double pw = w - ml - mr;
    const double ph = h - mt - mb;
    if (pw <= 10.0 || ph <= 10.0) throw ConfigError("plot area is too small");

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    bool any = false;
    const auto take = [&](double x, double y) {
        if (!std::isfinite(x) || !std::isfinite(y)) return;
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
        any = true;
    };
    for (const Series& s : spec.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) take(s.x[i], s.y[i]);
    }
    for (const Marker& m : spec.markers) take(m.x, m.y);
    const Bounds bx = any ? padded(xlo, xhi) : Bounds{};
    const Bounds by = any ? padded(ylo, yhi) : Bounds{};

    const auto X = [&](double x) { return ml + (x - bx.lo) / (bx.hi - bx.lo) * pw; };
    const auto Y = [&](double y) { return mt + (1.0 - (y - by.lo) / (by.hi - by.lo)) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
    out << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"#ffffff\"/>\n";

    // Grid and tick labels.
    out << "<g font-family=\"monospace\" font-size=\"12\" fill=\"#444444\">\n";
    const double xstep = nice_step(bx.hi - bx.lo, 6);
    for (double t = std::ceil(bx.lo / xstep) * xstep; t <= bx.hi + xstep * 1e-9; t += xstep) {
        const double gx = X(t);
        out << "<line x1=\"" << px(gx) << "\" y1=\"" << px(mt) << "\" x2=\"" << px(gx)
            << "\" y2=\"" << px(mt + ph) << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << px(gx) << "\" y=\"" << px(mt + ph + 16.0)
            << "\" text-anchor=\"middle\">" << tick_text(t) << "</text>\n";
    }
    const double ystep = nice_step(by.hi - by.lo, 6);
    for (double t = std::ceil(by.lo / ystep) * ystep; t <= by.hi + ystep * 1e-9; t += ystep) {
        const double gy = Y(t);
        out << "<line x1=\"" << px(ml) << "\" y1=\"" << px(gy) << "\" x2=\"" << px(ml + pw)
            << "\" y2=\"" << px(gy) << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << px(ml - 6.0) << "\" y=\"" << px(gy + 4.0)
            << "\" text-anchor=\"end\">" << tick_text(t) << "</text>\n";
    }
    out << "</g>\n";

    out << "<rect x=\"" << px(ml) << "\" y=\"" << px(mt) << "\" width=\"" << px(pw)
        << "\" height=\"" << px(ph)
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    int color_idx = 0;
    for (const Series& s : spec.series) {
        const char* color = kPalette[color_idx % kPaletteSize];
        ++color_idx;
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.scatter) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                out << "<circle cx=\"" << px(X(s.x[i])) << "\" cy=\"" << px(Y(s.y[i]))
                    << "\" r=\"2.4\" fill=\"" << color << "\"/>\n";
            }
        } else {
            std::string points;
            const auto flush = [&]() {
                if (points.empty()) return;
                out << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.6\" points=\"" << points << "\"/>\n";
                points.clear();
            };
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                    flush();
                    continue;
                }
                if (!points.empty()) points += ' ';
                points += px(X(s.x[i]));
                points += ',';
                points += px(Y(s.y[i]));
            }
            flush();
        }
    }

    for (const Marker& m : spec.markers) {
        if (!std::isfinite(m.x) || !std::isfinite(m.y)) continue;
        out << "<line x1=\"" << px(X(m.x)) << "\" y1=\"" << px(mt) << "\" x2=\"" << px(X(m.x))
            << "\" y2=\"" << px(mt + ph)
            << "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
        out << "<circle cx=\"" << px(X(m.x)) << "\" cy=\"" << px(Y(m.y))
            << "\" r=\"3.2\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1.2\"/>\n";
        out << "<text font-family=\"monospace\" font-size=\"12\" fill=\"#222222\" x=\""
            << px(std::min(X(m.x) + 8.0, ml + pw - 4.0)) << "\" y=\"" << px(Y(m.y) - 8.0)
            << "\">" << esc(m.text) << "</text>\n";
    }

    // Legend, top-right corner of the plot area.
    if (!spec.series.empty()) {
        const double lx = ml + pw - 150.0;
        double ly = mt + 14.0;
        out << "<g font-family=\"monospace\" font-size=\"12\" fill=\"#222222\">\n";
        color_idx = 0;
        for (const Series& s : spec.series) {
            const char* color = kPalette[color_idx % kPaletteSize];
            ++color_idx;
            if (s.label.empty()) continue;
            out << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly - 4.0) << "\" x2=\""
                << px(lx + 22.0) << "\" y2=\"" << px(ly - 4.0) << "\" stroke=\"" << color
                << "\" stroke-width=\"2.4\"/>\n";
            out << "<text x=\"" << px(lx + 28.0) << "\" y=\"" << px(ly) << "\">" << esc(s.label)
                << "</text>\n";
            ly += 16.0;
        }
        out << "</g>\n";
    }

    out << "<text font-family=\"monospace\" font-size=\"14\" fill=\"#111111\" x=\"" << px(w / 2.0)
        << "\" y=\"22\" text-anchor=\"middle\">" << esc(spec.title) << "</text>\n";
    out << "<text font-family=\"monospace\" font-size=\"12\" fill=\"#333333\" x=\""
        << px(ml + pw / 2.0) << "\" y=\"" << px(h - 12.0) << "\" text-anchor=\"middle\">"
        << esc(spec.x_label) << "</text>\n";
    out << "<text font-family=\"monospace\" font-size=\"12\" fill=\"#333333\" transform=\"rotate(-90 14 "
        << px(mt + ph / 2.0) << ")\" x=\"14\" y=\"" << px(mt + ph / 2.0)
        << "\" text-anchor=\"middle\">" << esc(spec.y_label) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

void write_svg(const PlotSpec& spec, const std::string& path) {
    write_text_file(path, render_svg(spec));
}

} // namespace powerloop
