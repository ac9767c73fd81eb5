// sweep.hpp: declarative parameter sweeps over the squeezing strength, and the
// CSV/config formats used by the `simulate` tool.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqcavity/observables.hpp"

namespace sqcavity {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sweep point failed; `r` names the offending squeezing strength.
class SweepPointError : public std::runtime_error {
public:
    enum class Kind { solver, truncation };

    SweepPointError(const std::string& what, double r, Kind kind, int suggested_cutoff = 0)
        : std::runtime_error(what), r_(r), kind_(kind), suggested_cutoff_(suggested_cutoff) {}

    double r() const noexcept { return r_; }
    Kind kind() const noexcept { return kind_; }
    int suggested_cutoff() const noexcept { return suggested_cutoff_; }

private:
    double r_;
    Kind kind_;
    int suggested_cutoff_;
};

enum class SweepMode { moments_sweep, distribution, wigner, bogoliubov_check };

std::string to_string(SweepMode mode);
SweepMode parse_mode(const std::string& text);

struct WignerGridSpec {
    double extent = 5.0;
    int points = 101;
};

struct SweepConfig {
    SweepMode mode = SweepMode::moments_sweep;
    std::vector<double> r_values;  // empty: the mode's default grid
    double phi = 0.0;
    double g0 = 15.0;
    double gamma = 1.0;
    double kappa = 1.0;
    double delta_A = 0.0;
    double delta_C = 0.0;
    bool atom_present = true;
    int fock_cutoff = 60;
    int guard = -1;  // < 0: default_guard(fock_cutoff)
    double epsilon = kTruncationEpsilon;
    bool adaptive_cutoff = true;  // grow the cutoff when the tail check fails
    int max_cutoff = 240;
    WignerGridSpec wigner_grid;
    int wigner_pad = kDefaultDisplacementPad;
    std::string output_path;  // empty: mode default; "-" writes single-table modes to stdout
    int threads = 1;

    // Expands every default and validates; throws ConfigError.
    SweepConfig resolved() const;

    SystemParams system_params() const;
    SqueezedBath bath(double r) const { return {r, phi}; }

    // `key = value` lines for every field, in a fixed order.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

// {0, 0.05, …, 1.5}
std::vector<double> default_r_grid();
// {0.25, 0.5, 1.0}
std::vector<double> default_distribution_r_values();

// "a, b, c" or "start:stop:step" (inclusive).
std::vector<double> parse_r_values(const std::string& text);

// Applies one `key = value` setting; unknown keys and bad values throw ConfigError.
void apply_setting(SweepConfig& config, const std::string& key, const std::string& value);

// Flat key-value text: one `key = value` per line, `#` starts a comment.
SweepConfig parse_config_text(const std::string& text, SweepConfig base = {});
SweepConfig load_config_file(const std::filesystem::path& path, SweepConfig base = {});

// Worker cap from SIM_THREADS, defaulting to `fallback`.
int threads_from_env(int fallback = 1);

struct PointSolution {
    double r = 0.0;
    int cutoff = 0;
    DensityMatrix rho;
};

// Steady state at one r, growing the cutoff when allowed.
PointSolution solve_point(const SweepConfig& config, double r);

struct MomentsRow {
    double r, mean_n, p0, p1, abs_aa, arg_aa, rho_ee, purity, tail_mass;
    int cutoff;
};

struct DistributionRecord {
    double r;
    int cutoff;
    int guard;
    std::vector<double> probabilities;  // n = 0 … cutoff − guard − 1
    double tail_mass;
};

struct WignerRecord {
    double r;
    double g0;
    int cutoff;
    WignerGrid grid;
    GaussianMoments moments;
};

struct BogoliubovRow {
    double r;
    double mean_n_lab, mean_n_bog;
    double rho_ee_lab, rho_ee_bog;
    double discrepancy;
    bool pass;
    int cutoff;
};

inline constexpr double kFrameAgreement = 1e-4;

std::vector<MomentsRow> run_moments_sweep(const SweepConfig& config);
std::vector<DistributionRecord> run_distribution(const SweepConfig& config);
std::vector<WignerRecord> run_wigner(const SweepConfig& config);
std::vector<BogoliubovRow> run_bogoliubov_check(const SweepConfig& config);

// Shortest round-trip decimal form.
std::string format_number(double v);

// Output file for one r (and g0) in the per-point modes: <stem>_r<r>[_g<g0>]<ext>.
std::filesystem::path per_point_path(const std::filesystem::path& base, double r, std::optional<double> g0 = {});

// Runs the configured mode and writes its files; returns the paths written.
// Nothing is written unless every point succeeds.
std::vector<std::filesystem::path> run_and_write(const SweepConfig& config, std::ostream* stdout_sink = nullptr);

} // namespace sqcavity
