#pragma once

// The experiment drivers behind the heatseries CLI. Each returns the rendered
// output plus the outcome of the inequalities it asserts, so the command-line
// tool and the tests share one implementation.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatseries/bounds.hpp"
#include "heatseries/decomposition.hpp"
#include "heatseries/eigen.hpp"
#include "heatseries/io.hpp"
#include "heatseries/kernel_approx.hpp"
#include "heatseries/moments.hpp"
#include "heatseries/reference.hpp"

namespace heatseries {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::string subcommand;
    int dim = 1;
    double amplitude = 1.0;
    double t0 = 1.0;
    double t = 2.0;
    int kmax = 40;
    std::optional<double> grid_extent;
    std::optional<int> grid_points;
    std::string format = "csv";
    bool plot = false;
    bool all_k = false;

    GaussianDatum datum() const { return GaussianDatum{amplitude, t0, dim}; }

    GridSpec grid() const {
        GridSpec g = default_grid(dim, t, t0);
        if (grid_extent) g.extent = *grid_extent;
        if (grid_points) g.points = *grid_points;
        return g;
    }

    void validate() const {
        static const std::vector<std::string> known = {"error-curve", "divergence", "eigen-compare", "decomp-check",
                                                       "moments"};
        if (std::find(known.begin(), known.end(), subcommand) == known.end()) {
            throw UsageError("unknown subcommand '" + subcommand + "'");
        }
        if (dim < 1) throw UsageError("--dim must be >= 1");
        if (!(amplitude > 0.0)) throw UsageError("--amplitude must be positive");
        if (!(t0 > 0.0)) throw UsageError("--t0 must be positive");
        if (!(t > 0.0)) throw UsageError("--t must be positive");
        if (kmax < 0 || kmax > kMaxRecurrenceDegree - 1) {
            throw UsageError("--kmax must lie in [0, " + std::to_string(kMaxRecurrenceDegree - 1) + "]");
        }
        if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
        if (subcommand == "error-curve" && dim > 2) throw UsageError("error-curve supports --dim 1 or 2");
        if (subcommand == "eigen-compare" && dim > 2) throw UsageError("eigen-compare supports --dim 1 or 2");
        if (subcommand == "divergence" && !(t < t0)) {
            throw UsageError("divergence requires t < t0 (got t=" + format_number(t) + ", t0=" + format_number(t0) + ")");
        }
        if (grid_points && (*grid_points < 3 || *grid_points % 2 == 0)) {
            throw UsageError("--grid-points must be odd and >= 3");
        }
        if (grid_extent && !(*grid_extent > 0.0)) throw UsageError("--grid-extent must be positive");
    }
};

/// One output file: a relative suffix ("" for the main --out path) and its
/// contents.
struct OutputFile {
    std::string suffix;
    std::string contents;
};

struct ExperimentResult {
    std::vector<OutputFile> files;
    std::vector<std::string> failures;  ///< violated assertions
    std::vector<std::string> notes;     ///< informational, printed to stderr
    bool ok() const { return failures.empty(); }
};

namespace detail {

inline std::string render(const Table& table, const std::string& format) {
    return format == "json" ? table.to_json().dump(2) + "\n" : table.to_csv();
}

inline std::string fmt_k(int k) { return std::to_string(k); }

}  // namespace detail

/// Error curve for Gaussian data; asserts sup-error <= F(k) on every row.
inline ExperimentResult cmd_error_curve(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult out;
    if (cfg.t < cfg.t0) out.notes.push_back("warning: t < t0, the series diverges in this regime");
    const auto u0 = cfg.datum();
    const auto table = build_moment_table(u0, cfg.kmax + 1);
    const auto curve = error_curve(u0, table, cfg.t, cfg.kmax, cfg.grid(), cfg.all_k);

    for (const auto& r : curve.rows) {
        if (!(r.sup_error <= r.F_k)) {
            out.failures.push_back("k=" + detail::fmt_k(r.k) + ": sup error " + format_number(r.sup_error) +
                                   " exceeds F(k) = " + format_number(r.F_k));
        }
        if (r.G_k && r.F_k > *r.G_k) {
            out.notes.push_back("k=" + detail::fmt_k(r.k) + ": F(k) = " + format_number(r.F_k) + " exceeds G(k) = " +
                                format_number(*r.G_k));
        }
    }
    out.files.push_back({"", cfg.format == "json" ? error_curve_json(curve) : error_curve_csv(curve)});
    if (cfg.plot) out.files.push_back({".svg", error_curve_svg(curve)});
    return out;
}

/// |u_k(0,t)| for 0 < t < t0 with the lower bound and the degree-k block.
/// d >= 2 asserts |u_k(0,t)| >= lb on every row; d = 1 reports the fitted
/// growth slope and constant.
inline ExperimentResult cmd_divergence(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult out;
    const auto u0 = cfg.datum();
    const auto table = build_moment_table(u0, cfg.kmax);
    const HermiteSeries series(table, cfg.t, cfg.kmax);
    const auto res = series.evaluate(std::vector<double>(cfg.dim, 0.0));
    const auto prefixes = res.prefix_values();

    Table tab{{"k", "u_k", "abs_u_k", "block_k", "lb", "lb_certified"}, {}};
    std::vector<int> ks;
    std::vector<double> vals;
    const int step = cfg.all_k ? 1 : 2;
    for (int k = 0; k <= cfg.kmax; k += step) {
        const ApproxConfig ac{cfg.dim, k, cfg.t};
        const auto lb = divergence_lower_bound(cfg.amplitude, cfg.t0, ac);
        const double value = prefixes[k];
        tab.rows.push_back({detail::fmt_k(k), format_number(value), format_number(std::fabs(value)),
                            format_number(res.partials[k].to_double()), format_number(lb.value.to_double()),
                            lb.certified ? "true" : "false"});
        if (lb.certified && !(std::fabs(value) >= lb.value.to_double())) {
            out.failures.push_back("k=" + detail::fmt_k(k) + ": |u_k(0,t)| = " + format_number(std::fabs(value)) +
                                   " below the lower bound " + format_number(lb.value.to_double()));
        }
        if (k >= 10 && k % 2 == 0) {
            ks.push_back(k);
            vals.push_back(value);
        }
    }
    if (ks.size() >= 2) {
        std::vector<double> xs(ks.begin(), ks.end());
        const auto fit = fit_log_line(xs, vals);
        out.notes.push_back("fitted slope of ln|u_k(0,t)| per unit k: " + format_number(fit.slope) +
                            " (reference 0.5 ln(t0/t) = " + format_number(0.5 * std::log(cfg.t0 / cfg.t)) + ")");
        if (cfg.dim == 1) {
            out.notes.push_back("fitted constant B: " + format_number(fit_divergence_constant(ks, vals, cfg.t0, cfg.t)));
        }
    }
    out.files.push_back({"", detail::render(tab, cfg.format)});
    if (cfg.plot) {
        PlotSeries u{"|u_k(0,t)|", {}, {}, "#1f77b4"}, lb{"lower bound", {}, {}, "#d62728"};
        for (const auto& row : tab.rows) {
            u.x.push_back(std::stod(row[0]));
            u.y.push_back(std::stod(row[2]));
            lb.x.push_back(std::stod(row[0]));
            lb.y.push_back(std::stod(row[4]));
        }
        out.files.push_back({".svg", svg_log_plot("Growth of u_k at the origin, t = " + format_number(cfg.t), "k", {u, lb})});
    }
    return out;
}

/// Scaled discrepancy max |E_k - t^{d/2} u_k| / max(1, |t^{d/2} u_k|) over
/// a z-grid on [-4, 4]^d, where E_k is the truncated eigenfunction
/// expansion with coefficients from the moments of u0.
inline std::vector<double> eigen_discrepancies(const GaussianDatum& u0, double t, int kmax, int points_per_axis) {
    const auto table = build_moment_table(u0, kmax);
    const auto coeffs = eigen_coeffs_from_moments(table);
    const HermiteSeries series(table, t, kmax);
    const double scale = std::pow(t, 0.5 * u0.dim);
    std::vector<double> worst(static_cast<std::size_t>(kmax) + 1, 0.0);
    auto visit = [&](const std::vector<double>& z) {
        SimilarityPoint p{z, std::log(t)};
        const auto [x, tt] = from_similarity(p);
        const auto direct = series.evaluate(x).prefix_values();
        for (int k = 0; k <= kmax; ++k) {
            const double e = eval_expansion(coeffs, p, k).value;
            const double ref = scale * direct[k];
            worst[k] = std::max(worst[k], std::fabs(e - ref) / std::max(1.0, std::fabs(ref)));
        }
    };
    auto node = [&](int i) { return -4.0 + 8.0 * i / (points_per_axis - 1); };
    if (u0.dim == 1) {
        for (int i = 0; i < points_per_axis; ++i) visit({node(i)});
    } else {
        for (int i = 0; i < points_per_axis; ++i) {
            for (int j = 0; j < points_per_axis; ++j) visit({node(i), node(j)});
        }
    }
    return worst;
}

struct ValidityRow {
    double t = 0.0;
    ValidityResult result;
};

/// validity_integral verdicts for Gaussian data at t in {0.5, 0.9, 1.1, 2} t0.
inline std::vector<ValidityRow> validity_sweep(const GaussianDatum& u0) {
    std::vector<ValidityRow> rows;
    for (double f : {0.5, 0.9, 1.1, 2.0}) {
        const double t = f * u0.t0;
        rows.push_back({t, validity_integral(gaussian_log_solution(u0.amplitude, u0.t0, u0.dim, t), t, u0.dim)});
    }
    return rows;
}

inline ExperimentResult cmd_eigen_compare(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult out;
    const auto u0 = cfg.datum();
    const auto disc = eigen_discrepancies(u0, cfg.t, cfg.kmax, cfg.dim == 1 ? 81 : 21);
    Table tab{{"k", "discrepancy"}, {}};
    const int step = cfg.all_k ? 1 : 2;
    for (int k = 0; k <= cfg.kmax; k += step) {
        tab.rows.push_back({detail::fmt_k(k), format_number(disc[k])});
        if (!(disc[k] <= 1e-10)) {
            out.failures.push_back("k=" + detail::fmt_k(k) + ": expansion discrepancy " + format_number(disc[k]) +
                                   " exceeds 1e-10");
        }
    }
    Table val{{"t", "t_over_t0", "verdict", "partial_integral", "radius"}, {}};
    for (const auto& row : validity_sweep(u0)) {
        const bool expected = row.t > u0.t0;
        val.rows.push_back({format_number(row.t), format_number(row.t / u0.t0),
                            row.result.finite ? "finite" : "divergent",
                            row.result.finite ? format_number(row.result.value) : "",
                            format_number(row.result.radius)});
        if (row.result.finite != expected) {
            out.failures.push_back("t=" + format_number(row.t) + ": validity verdict " +
                                   (row.result.finite ? "finite" : "divergent") + " disagrees with t > t0");
        }
    }
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["discrepancy"] = tab.to_json();
        j["validity"] = val.to_json();
        out.files.push_back({"", j.dump(2) + "\n"});
    } else {
        out.files.push_back({"", tab.to_csv()});
        out.files.push_back({".validity.csv", val.to_csv()});
    }
    return out;
}

inline ExperimentResult cmd_decomp_check(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult out;
    Table tab{{"case", "quantity", "value", "bound", "pass"}, {}};
    for (const auto& c : default_decomposition_suite()) {
        const auto r = decomposition_residual(c.f, c.k, c.phi);
        const bool pass = r.residual <= 1e-8;
        tab.rows.push_back({c.name, "residual", format_number(r.residual), format_number(1e-8), pass ? "true" : "false"});
        if (!pass) out.failures.push_back(c.name + ": residual " + format_number(r.residual) + " exceeds 1e-8");
    }
    for (const auto& c : default_remainder_suite()) {
        const double norm = remainder_l1_norm(c.f, c.alpha);
        const double bound = c.bound + 1e-8;
        const bool pass = norm <= bound;
        tab.rows.push_back({c.name, "l1_norm", format_number(norm), format_number(bound), pass ? "true" : "false"});
        if (!pass) out.failures.push_back(c.name + ": ||F||_1 = " + format_number(norm) + " exceeds " + format_number(bound));
    }
    out.files.push_back({"", detail::render(tab, cfg.format)});
    return out;
}

inline ExperimentResult cmd_moments(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult out;
    const auto table = build_moment_table(cfg.datum(), cfg.kmax);
    if (cfg.format == "json") {
        out.files.push_back({"", moment_table_json(table).dump(2) + "\n"});
        return out;
    }
    Table tab{{"alpha", "sign", "logmag", "value"}, {}};
    for (const auto& [a, m] : table.entries()) {
        std::string alpha;
        for (int i = 0; i < a.dim(); ++i) alpha += (i ? ";" : "") + std::to_string(a[i]);
        tab.rows.push_back({alpha, std::to_string(m.sign), m.is_zero() ? "" : format_number(m.logmag),
                            format_number(m.to_double())});
    }
    out.files.push_back({"", tab.to_csv()});
    return out;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.subcommand == "error-curve") return cmd_error_curve(cfg);
    if (cfg.subcommand == "divergence") return cmd_divergence(cfg);
    if (cfg.subcommand == "eigen-compare") return cmd_eigen_compare(cfg);
    if (cfg.subcommand == "decomp-check") return cmd_decomp_check(cfg);
    return cmd_moments(cfg);
}

}  // namespace heatseries
