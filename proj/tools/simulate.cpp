// simulate: steady-state sweeps of a squeezed-vacuum-driven atom–cavity system.
//
// Exit codes: 0 success, 2 config error, 3 solver error, 4 truncation error.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqcavity/errors.hpp"
#include "sqcavity/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitTruncation = 4;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady states of a two-level atom in a cavity driven by broadband squeezed vacuum"};

    std::string config_path;
    std::string mode;
    std::string r_values;
    std::vector<std::string> settings;
    double g0 = 0, gamma = 0, phi = 0;
    int cutoff = 0, threads = 0;
    bool no_atom = false;
    std::string out;

    app.add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
    app.add_option("--mode", mode, "moments_sweep | distribution | wigner | bogoliubov_check");
    app.add_option("--r", r_values, "Squeezing strengths: 'a,b,c' or 'start:stop:step'");
    auto* g0_opt = app.add_option("--g0", g0, "Atom-cavity coupling in units of kappa");
    auto* gamma_opt = app.add_option("--gamma", gamma, "Atomic damping in units of kappa");
    auto* phi_opt = app.add_option("--phi", phi, "Squeezing phase (radians)");
    app.add_flag("--no-atom", no_atom, "Empty cavity");
    auto* cutoff_opt = app.add_option("--cutoff", cutoff, "Fock cutoff N_max");
    auto* threads_opt = app.add_option("--threads", threads, "Worker count (default: SIM_THREADS or 1)");
    app.add_option("--out", out, "Output path ('-' for stdout in single-table modes)");
    app.add_option("--set", settings, "Extra config override key=value (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        sqcavity::SweepConfig config;
        config.threads = sqcavity::threads_from_env(1);
        if (!config_path.empty()) config = sqcavity::load_config_file(config_path, config);
        if (!mode.empty()) config.mode = sqcavity::parse_mode(mode);
        if (!r_values.empty()) config.r_values = sqcavity::parse_r_values(r_values);
        if (*g0_opt) config.g0 = g0;
        if (*gamma_opt) config.gamma = gamma;
        if (*phi_opt) config.phi = phi;
        if (no_atom) config.atom_present = false;
        if (*cutoff_opt) config.fock_cutoff = cutoff;
        if (*threads_opt) config.threads = threads;
        if (!out.empty()) config.output_path = out;
        for (const auto& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw sqcavity::ConfigError("--set expects key=value, got '" + s + "'");
            sqcavity::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
        }
        if (std::getenv("SIM_THREADS") != nullptr) {
            config.threads = std::min(config.threads, sqcavity::threads_from_env(1));
        }

        for (const auto& path : sqcavity::run_and_write(config)) std::cerr << "wrote " << path.string() << '\n';
        return 0;
    } catch (const sqcavity::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const sqcavity::UnsupportedFrameError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const sqcavity::SweepPointError& e) {
        std::cerr << (e.kind() == sqcavity::SweepPointError::Kind::truncation ? "truncation error: " : "solver error: ")
                  << e.what() << '\n';
        return e.kind() == sqcavity::SweepPointError::Kind::truncation ? kExitTruncation : kExitSolver;
    } catch (const sqcavity::TruncationError& e) {
        std::cerr << "truncation error: " << e.what() << '\n';
        return kExitTruncation;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
}
