#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <tuple>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metricgeo/classify.hpp"
#include "metricgeo/concave.hpp"
#include "metricgeo/errors.hpp"
#include "metricgeo/experiments.hpp"
#include "metricgeo/hyperbolicity.hpp"
#include "metricgeo/metric_space.hpp"
#include "metricgeo/transform.hpp"

namespace metricgeo {

// 17 significant digits: every double round-trips through the text form
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- distance tables: CSV `i,j,d`, one row per unordered pair ------------

inline void save_distance_csv(const FiniteMetricSpace& X, std::ostream& os) {
    os << "i,j,d\n";
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = i + 1; j < X.size(); ++j)
            os << i << "," << j << "," << format_double(X(i, j)) << "\n";
}

inline void save_distance_csv(const FiniteMetricSpace& X, const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw MetricSpaceError("cannot write " + path);
    save_distance_csv(X, os);
}

inline FiniteMetricSpace load_distance_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw MetricSpaceError("empty distance CSV");
    std::vector<std::tuple<std::size_t, std::size_t, double>> rows;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::size_t i, j;
        double d;
        char c1, c2;
        if (!(row >> i >> c1 >> j >> c2 >> d) || c1 != ',' || c2 != ',')
            throw MetricSpaceError("bad distance CSV row: " + line);
        rows.emplace_back(i, j, d);
        n = std::max(n, std::max(i, j) + 1);
    }
    if (n == 0)
        throw MetricSpaceError("distance CSV has no rows");
    std::vector<double> table(n * n, 0.0);
    for (const auto& [i, j, d] : rows) {
        table[i * n + j] = d;
        table[j * n + i] = d;
    }
    return FiniteMetricSpace(n, std::move(table));
}

inline FiniteMetricSpace load_distance_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw MetricSpaceError("cannot read " + path);
    return load_distance_csv(is);
}

// --- knot CSV `t,phi` (tab: loader, envelope/cap export) -----------------

namespace detail {

inline Tabulated load_knot_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw InvalidRange("cannot read knot file " + path);
    Tabulated tab;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (first && line.find_first_not_of("0123456789.,+-eE \t") != std::string::npos) {
            first = false;  // header row
            continue;
        }
        first = false;
        std::istringstream row(line);
        double t, v;
        char c;
        if (!(row >> t >> c >> v) || c != ',')
            throw InvalidRange("bad knot CSV row: " + line);
        tab.knots.push_back(t);
        tab.values.push_back(v);
    }
    if (tab.knots.size() >= 2) {
        const std::size_t m = tab.knots.size();
        tab.tail_slope = std::max(
            0.0, (tab.values[m - 1] - tab.values[m - 2]) / (tab.knots[m - 1] - tab.knots[m - 2]));
    }
    return tab;
}

}  // namespace detail

inline void save_knot_csv(const std::vector<std::pair<double, double>>& knots,
                          std::ostream& os) {
    os << "t,phi\n";
    for (const auto& [t, v] : knots)
        os << format_double(t) << "," << format_double(v) << "\n";
}

// --- curve / sweep CSV ---------------------------------------------------

inline void save_curve_csv(const std::vector<std::pair<double, double>>& curve,
                           std::ostream& os) {
    os << "T,value\n";
    for (const auto& [t, v] : curve)
        os << format_double(t) << "," << format_double(v) << "\n";
}

inline void save_sweep_csv(const std::vector<SweepEntry>& sweep, std::ostream& os) {
    os << "T,delta,ultra_defect\n";
    for (const auto& e : sweep)
        os << format_double(e.t_max) << "," << format_double(e.delta) << ","
           << format_double(e.ultra_defect) << "\n";
}

// --- JSON ----------------------------------------------------------------

inline nlohmann::json to_json(const HyperbolicityReport& r) {
    return {{"delta", r.delta},
            {"witness", r.witness},
            {"method",
             r.method == HyperbolicityMethod::GromovProduct ? "GromovProduct" : "FourPoint"}};
}

inline nlohmann::json to_json(const UltrametricReport& r) {
    return {{"defect", r.defect}, {"witness", r.witness}};
}

inline nlohmann::json to_json(const std::vector<std::pair<double, double>>& curve) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [t, v] : curve)
        arr.push_back({{"T", t}, {"value", v}});
    return arr;
}

inline nlohmann::json to_json(const ClassificationReport& r) {
    return {{"eta_hat", r.eta_hat},
            {"lambda_hat", r.lambda_hat},
            {"dilation_residual", to_json(r.dilation_residual)},
            {"doubling_gap", to_json(r.doubling_gap)},
            {"unboundedness_witness",
             {{"t", r.unboundedness_witness.first}, {"phi", r.unboundedness_witness.second}}},
            {"verdict", to_string(r.verdict)},
            {"thresholds_used",
             {{"lambda_min", r.thresholds_used.lambda_min},
              {"plateau_rel", r.thresholds_used.plateau_rel},
              {"plateau_abs", r.thresholds_used.plateau_abs},
              {"unbounded_min", r.thresholds_used.unbounded_min},
              {"lambda_horizon", r.thresholds_used.lambda_horizon},
              {"grid_t_min", r.thresholds_used.grid_t_min}}}};
}

inline nlohmann::json to_json(const std::vector<SweepEntry>& sweep) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : sweep)
        arr.push_back({{"T", e.t_max}, {"delta", e.delta}, {"ultra_defect", e.ultra_defect}});
    return arr;
}

// --- SVG: simple polyline chart, optionally log-scaled x -----------------

inline void save_svg_chart(const std::vector<std::pair<double, double>>& curve, bool log_x,
                           const std::string& title, std::ostream& os) {
    const int W = 640, H = 400, pad = 50;
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& [x, y] : curve) {
        const double xv = log_x ? std::log10(std::max(x, 1e-300)) : x;
        x_lo = std::min(x_lo, xv);
        x_hi = std::max(x_hi, xv);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    if (x_hi <= x_lo) x_hi = x_lo + 1;
    if (y_hi <= y_lo) y_hi = y_lo + 1;
    auto px = [&](double x) {
        const double xv = log_x ? std::log10(std::max(x, 1e-300)) : x;
        return pad + (W - 2 * pad) * (xv - x_lo) / (x_hi - x_lo);
    };
    auto py = [&](double y) { return H - pad - (H - 2 * pad) * (y - y_lo) / (y_hi - y_lo); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
       << "</text>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\""
       << H - pad << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
       << H - pad << "\" stroke=\"black\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : curve)
        os << px(x) << "," << py(y) << " ";
    os << "\"/>\n";
    for (const auto& [x, y] : curve)
        os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
           << "\" r=\"2.5\" fill=\"steelblue\"/>\n";
    os << "</svg>\n";
}

}  // namespace metricgeo
