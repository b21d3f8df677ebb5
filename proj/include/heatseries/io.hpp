#pragma once

// CSV / JSON / SVG output for moment tables, coefficients and error curves.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatseries/eigen.hpp"
#include "heatseries/moments.hpp"
#include "heatseries/reference.hpp"

namespace heatseries {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

/// Simple delimited table with a fixed header.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return out;
    }

    /// Array of objects keyed by header; numeric cells become JSON numbers
    /// and empty cells null.
    nlohmann::ordered_json to_json() const {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < header.size(); ++i) {
                const std::string& cell = i < r.size() ? r[i] : std::string();
                if (cell.empty()) {
                    obj[header[i]] = nullptr;
                    continue;
                }
                auto parsed = nlohmann::ordered_json::parse(cell, nullptr, false);
                if (!parsed.is_discarded() && parsed.is_number()) {
                    obj[header[i]] = std::move(parsed);
                } else {
                    obj[header[i]] = cell;  // inf / nan / text stay strings
                }
            }
            arr.push_back(std::move(obj));
        }
        return arr;
    }
};

// --- error curves ---------------------------------------------------------

inline Table error_curve_table(const ErrorCurve& curve) {
    Table t{{"k", "sup_error", "F_k", "G_k", "lb", "ratio"}, {}};
    for (const auto& r : curve.rows) {
        t.rows.push_back({std::to_string(r.k), format_number(r.sup_error), format_number(r.F_k), format_optional(r.G_k),
                          format_optional(r.lb), format_optional(r.ratio)});
    }
    return t;
}

inline std::string error_curve_csv(const ErrorCurve& curve) { return error_curve_table(curve).to_csv(); }

inline std::string error_curve_json(const ErrorCurve& curve) {
    return error_curve_table(curve).to_json().dump(2) + "\n";
}

// --- moment tables ----------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json entries_json(const std::map<MultiIndex, SignedLog>& entries) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [a, v] : entries) {
        nlohmann::ordered_json e;
        e["alpha"] = a.components();
        e["sign"] = v.sign;
        e["logmag"] = v.is_zero() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json::parse(format_number(v.logmag));
        arr.push_back(std::move(e));
    }
    return arr;
}

inline std::map<MultiIndex, SignedLog> entries_from_json(const nlohmann::json& arr) {
    std::map<MultiIndex, SignedLog> out;
    for (const auto& e : arr) {
        MultiIndex a(e.at("alpha").get<std::vector<int>>());
        const int sign = e.at("sign").get<int>();
        out[a] = sign == 0 ? SignedLog{} : SignedLog::from_log(sign, e.at("logmag").get<double>());
    }
    return out;
}

}  // namespace detail

/// {"dim", "kmax", "entries": [{"alpha", "sign", "logmag"}]} plus the
/// absolute moments under "abs_entries" in the same entry shape.
inline nlohmann::ordered_json moment_table_json(const MomentTable& table) {
    nlohmann::ordered_json j;
    j["dim"] = table.dim();
    j["kmax"] = table.kmax();
    j["entries"] = detail::entries_json(table.entries());
    if (table.has_abs_moments()) j["abs_entries"] = detail::entries_json(table.abs_entries());
    return j;
}

inline MomentTable moment_table_from_json(const nlohmann::json& j) {
    MomentTable table(j.at("dim").get<int>(), j.at("kmax").get<int>());
    for (const auto& [a, v] : detail::entries_from_json(j.at("entries"))) table.set(a, v);
    if (j.contains("abs_entries")) {
        for (const auto& [a, v] : detail::entries_from_json(j.at("abs_entries"))) table.set_abs(a, v);
    }
    return table;
}

inline nlohmann::ordered_json eigen_coeffs_json(const EigenCoeffs& c) {
    nlohmann::ordered_json j;
    j["dim"] = c.dim;
    j["kmax"] = c.kmax;
    j["t0_coeff"] = nlohmann::ordered_json::parse(format_number(c.t0_coeff));
    j["entries"] = detail::entries_json(c.entries);
    return j;
}

inline EigenCoeffs eigen_coeffs_from_json(const nlohmann::json& j) {
    EigenCoeffs c;
    c.dim = j.at("dim").get<int>();
    c.kmax = j.at("kmax").get<int>();
    c.t0_coeff = j.at("t0_coeff").get<double>();
    c.entries = detail::entries_from_json(j.at("entries"));
    return c;
}

// --- SVG ----------------------------------------------------------------------

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
};

/// Line plot with a log10 y axis. Non-positive y values are skipped.
inline std::string svg_log_plot(const std::string& title, const std::string& xlabel, const std::vector<PlotSeries>& series) {
    constexpr double W = 720, H = 480, L = 70, R = 160, T = 40, B = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, std::log10(s.y[i]));
            ymax = std::max(ymax, std::log10(s.y[i]));
        }
    }
    if (xmin > xmax) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 8));
    for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += ystep) {
        os << "<line x1=\"" << L - 4 << "\" y1=\"" << py(e) << "\" x2=\"" << W - R << "\" y2=\"" << py(e)
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << L - 8 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\" font-size=\"11\">1e" << e
           << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
           << format_number(std::round(xv * 100) / 100) << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel
       << "</text>\n";
    int legend = 0;
    for (const auto& s : series) {
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i])) continue;
            pts += format_number(px(s.x[i])) + "," + format_number(py(std::log10(s.y[i]))) + " ";
        }
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        const double ly = T + 16 + 18 * legend++;
        os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
           << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline std::string error_curve_svg(const ErrorCurve& curve) {
    PlotSeries err{"sup error", {}, {}, "#1f77b4"}, F{"F(k)", {}, {}, "#d62728"}, G{"G(k)", {}, {}, "#2ca02c"};
    for (const auto& r : curve.rows) {
        err.x.push_back(r.k);
        err.y.push_back(r.sup_error);
        F.x.push_back(r.k);
        F.y.push_back(r.F_k);
        if (r.G_k) {
            G.x.push_back(r.k);
            G.y.push_back(*r.G_k);
        }
    }
    std::vector<PlotSeries> s{err, F};
    if (!G.x.empty()) s.push_back(G);
    return svg_log_plot("Error of the truncated series, t = " + format_number(curve.t), "k", s);
}

}  // namespace heatseries
