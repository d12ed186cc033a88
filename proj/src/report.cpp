#include "flexwing/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace flexwing {

namespace {

std::string fmt(double v, int prec = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// 1-2-5 tick spacing covering [lo, hi] with about n intervals.
std::vector<double> nice_ticks(double lo, double hi, int n = 6) {
    double span = hi - lo;
    if (!(span > 0)) return {lo};
    double raw = span / n;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::vector<std::string> Provenance::lines() const {
    std::vector<std::string> out;
    out.push_back(std::string("flexwing ") + kToolVersion + " " + command);
    out.push_back("scenario: " + scenario);
    out.push_back("config_fnv1a64: " + config_hash);
    out.push_back("Lambda: " + (Lambda ? fmt(*Lambda) : std::string("n/a")));
    if (!extra.empty()) out.push_back(extra);
    return out;
}

void write_provenance(std::ostream& os, const Provenance& p) {
    for (const auto& l : p.lines()) os << "# " << l << '\n';
}

void write_svg_chart(std::ostream& os, const std::vector<Series>& series, const ChartOptions& o,
                     const Provenance& prov) {
    const double left = 80, right = 20, top = 40, bottom = 60;
    const double pw = o.width - left - right, ph = o.height - top - bottom;

    auto ty = [&](double v) { return o.log_y ? std::log10(std::max(v, 1e-300)) : v; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (o.log_y && !(s.y[i] > 0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymin -= 1, ymax += 1;
    double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--\n";
    for (const auto& l : prov.lines()) os << "  " << escape_xml(l) << '\n';
    os << "-->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
       << "\" viewBox=\"0 0 " << o.width << ' ' << o.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << o.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(o.title)
       << "</text>\n";

    os << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    auto xt = nice_ticks(xmin, xmax);
    auto yt = nice_ticks(ymin, ymax);
    for (double x : xt) os << "<line x1=\"" << fmt(px(x), 6) << "\" y1=\"" << top << "\" x2=\"" << fmt(px(x), 6) << "\" y2=\"" << top + ph << "\"/>\n";
    for (double y : yt) os << "<line x1=\"" << left << "\" y1=\"" << fmt(py(y), 6) << "\" x2=\"" << left + pw << "\" y2=\"" << fmt(py(y), 6) << "\"/>\n";
    os << "</g>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double x : xt)
        os << "<text x=\"" << fmt(px(x), 6) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << fmt(x, 4)
           << "</text>\n";
    for (double y : yt)
        os << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(y) + 4, 6) << "\" text-anchor=\"end\">"
           << (o.log_y ? "1e" + fmt(y, 3) : fmt(y, 4)) << "</text>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << o.height - 18 << "\" text-anchor=\"middle\">"
       << escape_xml(o.xlabel) << "</text>\n";
    os << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape_xml(o.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        std::ostringstream pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (o.log_y && !(s.y[i] > 0))) continue;
            pts << fmt(px(s.x[i]), 6) << ',' << fmt(py(ty(s.y[i])), 6) << ' ';
        }
        const char* color = kColors[k % (sizeof kColors / sizeof *kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
           << "\"/>\n";
        double ly = top + 14 + 16.0 * static_cast<double>(k);
        os << "<line x1=\"" << left + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << left + pw - 130 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw - 125 << "\" y=\"" << ly + 4 << "\">" << escape_xml(s.label) << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace flexwing
