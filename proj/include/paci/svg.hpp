#pragma once

// Minimal self-contained SVG charts for the indicator figures.

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "paci/aggregator.hpp"
#include "paci/sensitivity.hpp"

namespace paci::svg {

struct Line {
    std::string name;
    std::string color;
    std::vector<double> y;
    bool filled = false;  // area down to the previous filled line (stacking)
};

struct Chart {
    std::string title;
    std::vector<std::string> x_labels;  // one per point
    std::vector<Line> lines;
    std::vector<Cutoff> cutoffs;  // horizontal reference lines
    double y_max = 180.0;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string escape(const std::string& s) {
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

}  // namespace detail

inline std::string render(const Chart& chart) {
    constexpr double W = 960, H = 480, L = 60, R = 140, T = 40, B = 50;
    const double pw = W - L - R;
    const double ph = H - T - B;
    const std::size_t n = chart.x_labels.size();
    auto px = [&](std::size_t i) { return L + (n > 1 ? pw * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0); };
    auto py = [&](double v) { return T + ph * (1.0 - std::clamp(v, 0.0, chart.y_max) / chart.y_max); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
       << detail::escape(chart.title) << "</text>\n";

    for (const auto& c : chart.cutoffs) {
        if (c.value > chart.y_max) continue;
        const double y = py(c.value);
        os << "<line x1=\"" << L << "\" y1=\"" << detail::fmt(y) << "\" x2=\"" << L + pw << "\" y2=\""
           << detail::fmt(y) << "\" stroke=\"" << c.color << "\" stroke-dasharray=\"4 3\"/>\n";
        os << "<text x=\"" << L + pw + 4 << "\" y=\"" << detail::fmt(y + 4)
           << "\" font-family=\"sans-serif\" font-size=\"10\">" << detail::escape(c.label) << "</text>\n";
    }

    // axes
    os << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 6; ++k) {
        const double v = chart.y_max * k / 6.0;
        os << "<text x=\"" << L - 6 << "\" y=\"" << detail::fmt(py(v) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << detail::fmt(v) << "</text>\n";
    }
    if (n > 0) {
        const std::size_t ticks = std::min<std::size_t>(6, n);
        for (std::size_t k = 0; k < ticks; ++k) {
            const std::size_t i = ticks > 1 ? k * (n - 1) / (ticks - 1) : 0;
            os << "<text x=\"" << detail::fmt(px(i)) << "\" y=\"" << T + ph + 18
               << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
               << detail::escape(chart.x_labels[i]) << "</text>\n";
        }
    }

    std::vector<double> base(n, 0.0);
    for (const auto& line : chart.lines) {
        if (line.y.empty()) continue;
        std::ostringstream pts;
        for (std::size_t i = 0; i < line.y.size() && i < n; ++i) {
            pts << (i ? " " : "") << detail::fmt(px(i)) << ',' << detail::fmt(py(line.y[i]));
        }
        if (line.filled) {
            std::ostringstream poly;
            poly << pts.str();
            for (std::size_t i = std::min(line.y.size(), n); i-- > 0;) {
                poly << ' ' << detail::fmt(px(i)) << ',' << detail::fmt(py(base[i]));
            }
            os << "<polygon points=\"" << poly.str() << "\" fill=\"" << line.color
               << "\" fill-opacity=\"0.6\" stroke=\"none\"/>\n";
            for (std::size_t i = 0; i < line.y.size() && i < n; ++i) base[i] = line.y[i];
        }
        os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << line.color
           << "\" stroke-width=\"1.2\"/>\n";
    }

    double ly = T + 10;
    for (const auto& line : chart.lines) {
        if (line.name.empty()) continue;
        os << "<rect x=\"" << L + 8 << "\" y=\"" << detail::fmt(ly - 8) << "\" width=\"10\" height=\"10\" fill=\""
           << line.color << "\"/>";
        os << "<text x=\"" << L + 22 << "\" y=\"" << detail::fmt(ly + 1)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << detail::escape(line.name) << "</text>\n";
        ly += 14;
    }
    os << "</svg>\n";
    return os.str();
}

inline std::vector<std::string> dates_of(const IndicatorSeries& s) {
    std::vector<std::string> out;
    for (const auto& p : s.points) out.push_back(p.date.iso());
    return out;
}

inline std::string evolution(const IndicatorSeries& s, const StateScale& scale) {
    Chart c{"Indicator evolution", dates_of(s), {}, scale.cutoffs};
    Line line{"overall", "#222222", {}};
    for (const auto& p : s.points) line.y.push_back(p.overall);
    c.lines.push_back(std::move(line));
    return render(c);
}

inline std::string cumulative_contributions(const IndicatorSeries& s) {
    static const char* colors[kCriteria] = {"#4575b4", "#91bfdb", "#fc8d59", "#d73027", "#7b3294"};
    Chart c{"Cumulative contribution of each criterion", dates_of(s), {}, {}};
    std::vector<double> acc(s.size(), 0.0);
    for (std::size_t j = 0; j < kCriteria; ++j) {
        Line line{kCriterionNames[j], colors[j], {}, true};
        for (std::size_t i = 0; i < s.size(); ++i) {
            acc[i] += s.points[i].contributions[j];
            line.y.push_back(acc[i]);
        }
        c.lines.push_back(std::move(line));
    }
    return render(c);
}

// Optional trajectories are drawn underneath the bounds.
inline std::string envelope(const Envelope& env, const StateScale& scale,
                            const std::vector<Trajectory>& trajectories = {}) {
    Chart c{"Exact sensitivity envelope", {}, {}, scale.cutoffs};
    for (const auto& t : trajectories) c.lines.push_back({"", "#c8c8c8", t.values});
    Line lo{"v_minus", "#1a9850", {}}, nom{"nominal", "#222222", {}}, hi{"v_plus", "#d73027", {}};
    for (const auto& p : env.points) {
        c.x_labels.push_back(p.date.iso());
        lo.y.push_back(p.v_minus);
        nom.y.push_back(p.v_nominal);
        hi.y.push_back(p.v_plus);
    }
    c.lines.push_back(std::move(lo));
    c.lines.push_back(std::move(nom));
    c.lines.push_back(std::move(hi));
    return render(c);
}

inline std::string counterfactual(const IndicatorSeries& actual, const IndicatorSeries& cf,
                                  const StateScale& scale) {
    Chart c{"Indicator with and without vaccination", dates_of(actual), {}, scale.cutoffs};
    Line a{"actual", "#222222", {}}, b{"no vaccination", "#d73027", {}};
    for (const auto& p : actual.points) a.y.push_back(p.overall);
    for (const auto& p : cf.points) b.y.push_back(p.overall);
    c.lines = {std::move(b), std::move(a)};
    return render(c);
}

}  // namespace paci::svg
