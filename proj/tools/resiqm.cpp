#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "resiqm/resiqm.hpp"

namespace {

enum Exit { ok = 0, validation = 1, numerical = 2 };

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw resiqm::ValidationError("", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& path, const std::string& out_dir, bool quiet)
{
    auto cfg = resiqm::load_config(slurp(path));
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    const auto rec = resiqm::run_scenario(cfg);
    if (!quiet) {
        const auto& first = rec.series.front();
        const auto& last = rec.series.back();
        std::printf("steps      %zu\n", rec.series.size() - 1);
        std::printf("t_final    %.10g\n", last.t);
        std::printf("norm       %.10g -> %.10g\n", first.norm, last.norm);
        std::printf("<q>, <p>   %.10g, %.10g\n", last.q_exp, last.p_exp);
        std::printf("energy     %.10g -> %.10g\n", first.energy, last.energy);
        if (!cfg.output_dir.empty()) std::printf("output     %s\n", cfg.output_dir.c_str());
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"residual Schroedinger toolkit"};
    app.set_version_flag("--version", std::string(resiqm::version_string));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool quiet = false;
    auto* run_cmd = app.add_subcommand("run", "run a scenario");
    run_cmd->add_option("config", config_path, "scenario JSON")->required();
    run_cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
    run_cmd->add_flag("--quiet", quiet, "no summary");

    auto* validate_cmd = app.add_subcommand("validate", "check a scenario file");
    validate_cmd->add_option("config", config_path, "scenario JSON")->required();

    auto* spectrum_cmd = app.add_subcommand("spectrum", "analytic spectra");
    spectrum_cmd->require_subcommand(1);
    double D = 0.0, a = 0.0;
    resiqm::SimulationParams params;
    auto* morse_cmd = spectrum_cmd->add_subcommand("morse", "Morse bound-state energies");
    morse_cmd->add_option("--D", D, "well depth")->required();
    morse_cmd->add_option("--a", a, "range parameter")->required();
    morse_cmd->add_option("--hbar", params.hbar, "Planck constant")->required();
    morse_cmd->add_option("--mass", params.mass, "mass")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : validation;
    }

    try {
        if (run_cmd->parsed()) return run(config_path, out_dir, quiet);
        if (validate_cmd->parsed()) {
            resiqm::load_config(slurp(config_path));
            std::printf("ok\n");
            return ok;
        }
        if (morse_cmd->parsed()) {
            const auto levels = resiqm::morse_spectrum(D, a, params);
            for (std::size_t n = 0; n < levels.size(); ++n) {
                std::printf("%zu %s\n", n, resiqm::format_number(levels[n]).c_str());
            }
            return ok;
        }
    } catch (const resiqm::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return validation;
    } catch (const resiqm::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return numerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return numerical;
    }
    return ok;
}
