// heatseries: experiment driver for the heat-kernel Hermite series.
//
//   heatseries <error-curve|divergence|eigen-compare|decomp-check|moments>
//       --dim D --t0 T0 --t T --amplitude C --kmax K
//       [--grid-extent R --grid-points N] [--format csv|json] [--plot] [--all-k]
//       --out PATH
//
// Exit status: 0 success, 1 asserted inequality failed, 2 usage error, 3 I/O error.

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "heatseries/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

bool write_file(const std::string& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        std::cerr << "heatseries: cannot open " << path << " for writing: " << std::strerror(errno) << "\n";
        return false;
    }
    os << contents;
    os.close();
    if (!os) {
        std::cerr << "heatseries: write to " << path << " failed\n";
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    heatseries::ExperimentConfig cfg;
    std::string out_path;

    CLI::App app{"Heat-kernel Hermite series experiments"};
    app.require_subcommand(1, 1);
    std::vector<CLI::App*> subs;
    for (const char* name : {"error-curve", "divergence", "eigen-compare", "decomp-check", "moments"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--dim", cfg.dim, "spatial dimension");
        sub->add_option("--t0", cfg.t0, "Gaussian width parameter of the initial datum");
        sub->add_option("--t", cfg.t, "evaluation time");
        sub->add_option("--amplitude", cfg.amplitude, "Gaussian amplitude C");
        sub->add_option("--kmax", cfg.kmax, "largest truncation order");
        sub->add_option("--grid-extent", cfg.grid_extent, "grid half-width R");
        sub->add_option("--grid-points", cfg.grid_points, "grid points per axis (odd)");
        sub->add_option("--format", cfg.format, "csv or json");
        sub->add_flag("--plot", cfg.plot, "also write an SVG plot next to --out");
        sub->add_flag("--all-k", cfg.all_k, "include odd k");
        sub->add_option("--out", out_path, "output path")->required();
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    for (auto* sub : subs) {
        if (sub->parsed()) cfg.subcommand = sub->get_name();
    }

    heatseries::ExperimentResult result;
    try {
        result = heatseries::run_experiment(cfg);
    } catch (const heatseries::UsageError& e) {
        std::cerr << "heatseries: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "heatseries: " << e.what() << "\n";
        return kExitAssertion;
    }

    for (const auto& f : result.files) {
        if (!write_file(out_path + f.suffix, f.contents)) return kExitIo;
    }
    for (const auto& n : result.notes) std::cerr << n << "\n";
    for (const auto& f : result.failures) std::cerr << "FAILED: " << f << "\n";
    return result.ok() ? kExitOk : kExitAssertion;
}
