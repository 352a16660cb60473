// Command-line front end: manifold-resolved exact sweeps, variational
// mean-field sweeps, inversion scaling scans, ground-state tomography, and
// SVG rendering of the resulting CSV files.
//
// Exit codes: 0 success, 2 configuration error, 3 solver non-convergence.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tccross/csv.hpp"
#include "tccross/errors.hpp"
#include "tccross/plot.hpp"
#include "tccross/sweep.hpp"

namespace {

// Grid syntax: either "lo:hi:count" or a comma-separated value list.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' ||
            !in.eof() || count < 1)
            throw tc::ConfigError("malformed grid '" + text +
                                  "' (expected lo:hi:count)");
        for (int i = 0; i < count; ++i)
            out.push_back(count > 1 ? lo + (hi - lo) * i / (count - 1) : lo);
        return out;
    }
    std::istringstream in(text);
    std::string field;
    while (std::getline(in, field, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(field, &used));
            if (used != field.size())
                throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw tc::ConfigError("malformed grid value '" + field + "'");
        }
    }
    if (out.empty())
        throw tc::ConfigError("empty grid '" + text + "'");
    return out;
}

void write_output_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw tc::ConfigError("cannot open output file '" + path + "'");
    out << content;
    if (!out)
        throw tc::ConfigError("failed writing output file '" + path + "'");
}

void add_model_flags(CLI::App* sub, tc::SweepConfig& cfg) {
    sub->add_option("--emitters", cfg.params.n_emitters, "Number of emitters N");
    sub->add_option("--omega-c", cfg.params.omega_c, "Cavity frequency")
        ->capture_default_str();
    sub->add_option("--detuning", cfg.params.detuning,
                    "Detuning omega_c - omega_a");
    sub->add_option("--coupling", cfg.params.coupling, "Coupling g")
        ->capture_default_str();
    sub->add_option("--threads", cfg.threads,
                    "Worker threads (0 = hardware concurrency)");
    sub->set_config("--config", "", "Flat key = value config file");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tavis-Cummings crossover toolkit: per-manifold exact "
                 "diagonalization and variational mean-field sweeps"};
    app.set_version_flag("--version", "tccross 0.1.0");
    app.require_subcommand(1);

    tc::SweepConfig cfg;
    cfg.threads = 0;
    std::string out_path;
    std::string grid_text, rho_set_text;
    std::string figure, csv_path;

    CLI::App* exact = app.add_subcommand("exact", "Exact per-manifold sweep");
    add_model_flags(exact, cfg);
    exact->add_option("--nu-min", cfg.nu_min, "First manifold");
    exact->add_option("--nu-max", cfg.nu_max, "Last manifold")->required();
    exact->add_option("--jump-threshold", cfg.jump_threshold,
                      "Discontinuity threshold for statistics crossings")
        ->capture_default_str();
    exact->add_option("--out", out_path, "Output CSV path")->required();

    CLI::App* vari = app.add_subcommand("variational", "Coherent-state mean-field sweep");
    add_model_flags(vari, cfg);
    vari->add_option("--rho-min", cfg.rho_min, "First target density")
        ->capture_default_str();
    vari->add_option("--rho-max", cfg.rho_max, "Last target density")
        ->capture_default_str();
    vari->add_option("--rho-steps", cfg.rho_steps, "Grid points")
        ->capture_default_str();
    vari->add_option("--eta", cfg.eta, "Coupling modifier")->capture_default_str();
    vari->add_option("--epsilon", cfg.epsilon, "Symmetry-breaking drive")
        ->capture_default_str();
    vari->add_option("--out", out_path, "Output CSV path")->required();

    CLI::App* scaling = app.add_subcommand("scaling", "Scaled inversion vs omega_a");
    add_model_flags(scaling, cfg);
    scaling->add_option("--omega-a-grid", grid_text,
                        "Emitter frequencies, lo:hi:count or comma list")
        ->required();
    scaling->add_option("--rho-set", rho_set_text,
                        "Densities, comma list (default -0.4,-0.2,0,0.2,0.4,0.6)");
    scaling->add_option("--out", out_path, "Output CSV path")->required();

    CLI::App* tomo = app.add_subcommand("tomography", "Manifold density matrices");
    add_model_flags(tomo, cfg);
    tomo->add_option("--nu", cfg.nu_list, "Manifolds to dump")
        ->required()
        ->delimiter(',');
    tomo->add_option("--out", out_path, "Output CSV path")->required();

    CLI::App* plot = app.add_subcommand("plot", "Render SVG figures from a sweep CSV");
    plot->add_option("csv", csv_path, "Input CSV file")->required();
    plot->add_option("--figure", figure, "Figure id")->required();
    plot->add_option("--out", out_path, "Output SVG path")->required();

    try {
        app.parse(argc, argv);

        std::ostringstream body;
        if (exact->parsed()) {
            cfg.mode = tc::SweepMode::Exact;
            const tc::ExactSweepResult result = tc::run_exact_sweep(cfg);
            tc::write_exact_csv(body, cfg, result);
            write_output_file(out_path, body.str());
        } else if (vari->parsed()) {
            cfg.mode = tc::SweepMode::Variational;
            const auto points = tc::run_variational_sweep(cfg);
            tc::write_variational_csv(body, cfg, points);
            write_output_file(out_path, body.str());
        } else if (scaling->parsed()) {
            cfg.mode = tc::SweepMode::Scaling;
            cfg.omega_a_grid = parse_grid(grid_text);
            if (!rho_set_text.empty())
                cfg.rho_set = parse_grid(rho_set_text);
            const auto points = tc::run_scaling_sweep(cfg);
            tc::write_scaling_csv(body, cfg, points);
            write_output_file(out_path, body.str());
        } else if (tomo->parsed()) {
            cfg.mode = tc::SweepMode::Tomography;
            const auto sections = tc::run_tomography(cfg);
            tc::write_tomography_csv(body, cfg, sections);
            write_output_file(out_path, body.str());
        } else if (plot->parsed()) {
            const tc::CsvTable table = tc::read_csv_file(csv_path);
            const auto written = tc::render_figure(table, figure, out_path);
            for (const std::string& p : written)
                std::cout << p << "\n";
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // Help and version requests exit cleanly; anything else is bad config.
        return code == 0 ? 0 : 2;
    } catch (const tc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tc::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
