#include "sqcavity/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "sqcavity/errors.hpp"

namespace sqcavity {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError("'" + key + "': expected a number, got '" + value + "'");
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("'" + key + "': expected an integer, got '" + value + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + value + "'");
}

std::string join_numbers(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_number(values[i]);
    }
    return out;
}

std::string default_output(SweepMode mode) {
    switch (mode) {
    case SweepMode::moments_sweep: return "moments.csv";
    case SweepMode::distribution: return "distribution.csv";
    case SweepMode::wigner: return "wigner.csv";
    case SweepMode::bogoliubov_check: return "bogoliubov.csv";
    }
    return "out.csv";
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Errors are rethrown in input order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int threads, Fn fn) {
    std::vector<std::optional<T>> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*results[i]));
    }
    return out;
}

// Converts solver failures into a SweepPointError naming r.
template <typename Fn>
auto at_point(double r, Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const TruncationError& e) {
        throw SweepPointError("r = " + format_number(r) + ": " + e.what(), r, SweepPointError::Kind::truncation,
                              e.suggested_cutoff());
    } catch (const SolverError& e) {
        throw SweepPointError("r = " + format_number(r) + ": " + e.what(), r, SweepPointError::Kind::solver);
    }
}

// A guard left at its default follows the cutoff when the cutoff grows.
bool auto_guard(const SweepConfig& c) { return c.guard < 0 || c.guard == default_guard(c.fock_cutoff); }

int guard_for(const SweepConfig& c, int cutoff) { return auto_guard(c) ? default_guard(cutoff) : c.guard; }

SteadyStateOptions steady_options(const SweepConfig& c) {
    SteadyStateOptions o;
    o.guard = auto_guard(c) ? -1 : c.guard;
    o.epsilon = c.epsilon;
    return o;
}

DensityMatrix field_state(const DensityMatrix& rho) {
    return rho.space().has_atom() ? partial_trace_atom(rho) : rho;
}

void write_header(std::ostream& out, const SweepConfig& config, const std::vector<std::string>& extra = {}) {
    out << "# sqcavity simulate\n";
    for (const auto& [key, value] : config.echo()) out << "# " << key << " = " << value << '\n';
    for (const auto& line : extra) out << "# " << line << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

} // namespace

std::string to_string(SweepMode mode) {
    switch (mode) {
    case SweepMode::moments_sweep: return "moments_sweep";
    case SweepMode::distribution: return "distribution";
    case SweepMode::wigner: return "wigner";
    case SweepMode::bogoliubov_check: return "bogoliubov_check";
    }
    return "?";
}

SweepMode parse_mode(const std::string& text) {
    const std::string t = trim(text);
    if (t == "moments_sweep" || t == "moments") return SweepMode::moments_sweep;
    if (t == "distribution") return SweepMode::distribution;
    if (t == "wigner") return SweepMode::wigner;
    if (t == "bogoliubov_check" || t == "bogoliubov") return SweepMode::bogoliubov_check;
    throw ConfigError("unknown mode '" + text + "'");
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

std::vector<double> default_r_grid() {
    std::vector<double> r(31);
    for (int i = 0; i <= 30; ++i) r[static_cast<std::size_t>(i)] = i * 0.05;
    return r;
}

std::vector<double> default_distribution_r_values() { return {0.25, 0.5, 1.0}; }

std::vector<double> parse_r_values(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("r_values: empty list");
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw ConfigError("r_values: range must be start:stop:step");
        const double start = parse_double("r_values", parts[0]);
        const double stop = parse_double("r_values", parts[1]);
        const double step = parse_double("r_values", parts[2]);
        if (!(step > 0.0) || stop < start) throw ConfigError("r_values: range needs step > 0 and stop >= start");
        const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
        std::vector<double> out;
        for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    std::vector<double> out;
    std::stringstream ss(t);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_double("r_values", item));
    return out;
}

void apply_setting(SweepConfig& c, const std::string& raw_key, const std::string& value) {
    const std::string key = trim(raw_key);
    if (key == "mode") c.mode = parse_mode(value);
    else if (key == "r_values" || key == "r") c.r_values = parse_r_values(value);
    else if (key == "phi") c.phi = parse_double(key, value);
    else if (key == "g0") c.g0 = parse_double(key, value);
    else if (key == "gamma") c.gamma = parse_double(key, value);
    else if (key == "kappa") c.kappa = parse_double(key, value);
    else if (key == "delta_A") c.delta_A = parse_double(key, value);
    else if (key == "delta_C") c.delta_C = parse_double(key, value);
    else if (key == "atom_present") c.atom_present = parse_bool(key, value);
    else if (key == "fock_cutoff" || key == "cutoff") c.fock_cutoff = parse_int(key, value);
    else if (key == "guard") c.guard = parse_int(key, value);
    else if (key == "epsilon") c.epsilon = parse_double(key, value);
    else if (key == "adaptive_cutoff") c.adaptive_cutoff = parse_bool(key, value);
    else if (key == "max_cutoff") c.max_cutoff = parse_int(key, value);
    else if (key == "wigner_extent") c.wigner_grid.extent = parse_double(key, value);
    else if (key == "wigner_points") c.wigner_grid.points = parse_int(key, value);
    else if (key == "wigner_pad") c.wigner_pad = parse_int(key, value);
    else if (key == "output_path" || key == "out") c.output_path = trim(value);
    else if (key == "threads") c.threads = parse_int(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

SweepConfig parse_config_text(const std::string& text, SweepConfig base) {
    std::stringstream ss(text);
    int line_no = 0;
    for (std::string line; std::getline(ss, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        try {
            apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

SweepConfig load_config_file(const std::filesystem::path& path, SweepConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), std::move(base));
}

int threads_from_env(int fallback) {
    const char* env = std::getenv("SIM_THREADS");
    if (env == nullptr || *env == '\0') return fallback;
    try {
        return std::max(1, parse_int("SIM_THREADS", env));
    } catch (const ConfigError&) {
        throw ConfigError(std::string("SIM_THREADS must be a positive integer, got '") + env + "'");
    }
}

SweepConfig SweepConfig::resolved() const {
    SweepConfig c = *this;
    if (c.r_values.empty()) {
        c.r_values = c.mode == SweepMode::distribution ? default_distribution_r_values() : default_r_grid();
    }
    for (double r : c.r_values) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("r_values must be finite and >= 0");
    }
    if (c.fock_cutoff < 2) throw ConfigError("fock_cutoff must be >= 2");
    if (c.guard < 0) c.guard = default_guard(c.fock_cutoff);
    if (c.guard >= c.fock_cutoff) throw ConfigError("guard must be smaller than fock_cutoff");
    if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (c.max_cutoff < c.fock_cutoff) c.max_cutoff = c.fock_cutoff;
    if (!(c.kappa > 0.0)) throw ConfigError("kappa must be > 0");
    if (!(c.gamma >= 0.0) || !(c.g0 >= 0.0)) throw ConfigError("g0 and gamma must be >= 0");
    if (!std::isfinite(c.phi) || !std::isfinite(c.delta_A) || !std::isfinite(c.delta_C)) {
        throw ConfigError("phi and detunings must be finite");
    }
    if (!(c.wigner_grid.extent > 0.0) || c.wigner_grid.points < 2) throw ConfigError("wigner grid needs extent > 0 and >= 2 points");
    if (c.wigner_pad < 0) throw ConfigError("wigner_pad must be >= 0");
    if (c.threads < 1) c.threads = 1;
    if (c.output_path.empty()) c.output_path = default_output(c.mode);
    if (c.mode == SweepMode::bogoliubov_check && (c.delta_A != 0.0 || c.delta_C != 0.0 || c.phi != 0.0)) {
        throw ConfigError("bogoliubov_check requires delta_A = delta_C = phi = 0");
    }
    return c;
}

SystemParams SweepConfig::system_params() const {
    SystemParams p;
    p.delta_A = delta_A;
    p.delta_C = delta_C;
    p.g0 = g0;
    p.gamma = gamma;
    p.kappa = kappa;
    p.atom_present = atom_present;
    return p;
}

std::vector<std::pair<std::string, std::string>> SweepConfig::echo() const {
    return {
        {"mode", to_string(mode)},
        {"r_values", join_numbers(r_values)},
        {"phi", format_number(phi)},
        {"g0", format_number(g0)},
        {"gamma", format_number(gamma)},
        {"kappa", format_number(kappa)},
        {"delta_A", format_number(delta_A)},
        {"delta_C", format_number(delta_C)},
        {"atom_present", atom_present ? "true" : "false"},
        {"fock_cutoff", std::to_string(fock_cutoff)},
        {"guard", std::to_string(guard)},
        {"epsilon", format_number(epsilon)},
        {"adaptive_cutoff", adaptive_cutoff ? "true" : "false"},
        {"max_cutoff", std::to_string(max_cutoff)},
        {"wigner_extent", format_number(wigner_grid.extent)},
        {"wigner_points", std::to_string(wigner_grid.points)},
        {"wigner_pad", std::to_string(wigner_pad)},
        {"output_path", output_path},
    };
}

PointSolution solve_point(const SweepConfig& config, double r) {
    const SystemParams params = config.system_params();
    const SqueezedBath bath = config.bath(r);
    auto build = [&](int cutoff) { return build_liouvillian(params, bath, model_space(params, cutoff)); };
    return at_point(r, [&] {
        const int max_cutoff = config.adaptive_cutoff ? config.max_cutoff : config.fock_cutoff;
        DensityMatrix rho = steady_state_adaptive(build, config.fock_cutoff, max_cutoff, steady_options(config));
        const int cutoff = rho.space().fock_cutoff();
        return PointSolution{r, cutoff, std::move(rho)};
    });
}

std::vector<MomentsRow> run_moments_sweep(const SweepConfig& raw) {
    const SweepConfig config = raw.resolved();
    return parallel_map<MomentsRow>(config.r_values.size(), config.threads, [&](std::size_t i) {
        const PointSolution s = solve_point(config, config.r_values[i]);
        return at_point(s.r, [&] {
            const PhotonDistribution dist = photon_distribution(s.rho, guard_for(config, s.cutoff));
            const cplx aa = pair_amplitude(s.rho);
            MomentsRow row{};
            row.r = s.r;
            row.mean_n = mean_photon_number(s.rho);
            row.p0 = dist.probabilities(0);
            row.p1 = dist.probabilities(1);
            row.abs_aa = std::abs(aa);
            row.arg_aa = std::arg(aa);
            row.rho_ee = config.atom_present ? atom_excited_population(s.rho) : 0.0;
            row.purity = purity(field_state(s.rho));
            row.tail_mass = dist.tail_mass;
            row.cutoff = s.cutoff;
            return row;
        });
    });
}

std::vector<DistributionRecord> run_distribution(const SweepConfig& raw) {
    const SweepConfig config = raw.resolved();
    return parallel_map<DistributionRecord>(config.r_values.size(), config.threads, [&](std::size_t i) {
        const PointSolution s = solve_point(config, config.r_values[i]);
        return at_point(s.r, [&] {
            const PhotonDistribution dist = photon_distribution(s.rho, guard_for(config, s.cutoff));
            const int kept = s.cutoff - dist.guard;
            return DistributionRecord{s.r, s.cutoff, dist.guard,
                                      std::vector<double>(dist.probabilities.data(), dist.probabilities.data() + kept),
                                      dist.tail_mass};
        });
    });
}

std::vector<WignerRecord> run_wigner(const SweepConfig& raw) {
    const SweepConfig config = raw.resolved();
    const std::vector<double> axis = symmetric_axis(config.wigner_grid.extent, config.wigner_grid.points);
    std::vector<WignerRecord> out;
    // Points run in sequence; the grid evaluation itself is spread over the workers.
    for (double r : config.r_values) {
        const PointSolution s = solve_point(config, r);
        out.push_back(at_point(r, [&] {
            WignerOptions options;
            options.pad = config.wigner_pad;
            options.guard = guard_for(config, s.cutoff);
            options.epsilon = config.epsilon;
            options.threads = config.threads;
            WignerGrid grid = wigner(field_state(s.rho), axis, axis, options);
            const GaussianMoments moments = wigner_moments(grid);
            return WignerRecord{r, config.atom_present ? config.g0 : 0.0, s.cutoff, std::move(grid), moments};
        }));
    }
    return out;
}

std::vector<BogoliubovRow> run_bogoliubov_check(const SweepConfig& raw) {
    const SweepConfig config = raw.resolved();
    const SystemParams params = config.system_params();
    return parallel_map<BogoliubovRow>(config.r_values.size(), config.threads, [&](std::size_t i) {
        const double r = config.r_values[i];
        return at_point(r, [&] {
            int cutoff = config.fock_cutoff;
            for (;;) {
                const SteadyStateOptions options = steady_options(config);
                try {
                    const Space space = model_space(params, cutoff);
                    const DensityMatrix lab = steady_state(build_liouvillian(params, config.bath(r), space), options);
                    const DensityMatrix bog = steady_state(build_bogoliubov_liouvillian(params, r, space), options);
                    const Operator a = lab_annihilation_in_bogoliubov_frame(r, space);
                    BogoliubovRow row{};
                    row.r = r;
                    row.cutoff = cutoff;
                    row.mean_n_lab = mean_photon_number(lab);
                    row.mean_n_bog = real_expectation(bog, a.adjoint() * a);
                    if (config.atom_present) {
                        row.rho_ee_lab = atom_excited_population(lab);
                        row.rho_ee_bog = atom_excited_population(bog);
                    }
                    row.discrepancy = std::max(std::abs(row.mean_n_lab - row.mean_n_bog),
                                               std::abs(row.rho_ee_lab - row.rho_ee_bog));
                    row.pass = row.discrepancy < kFrameAgreement;
                    return row;
                } catch (const TruncationError& e) {
                    if (!config.adaptive_cutoff || cutoff >= config.max_cutoff) throw;
                    cutoff = std::min(config.max_cutoff, e.suggested_cutoff());
                }
            }
        });
    });
}

std::filesystem::path per_point_path(const std::filesystem::path& base, double r, std::optional<double> g0) {
    std::string name = base.stem().string() + "_r" + format_number(r);
    if (g0) name += "_g" + format_number(*g0);
    name += base.has_extension() ? base.extension().string() : std::string(".csv");
    return base.parent_path() / name;
}

std::vector<std::filesystem::path> run_and_write(const SweepConfig& raw, std::ostream* stdout_sink) {
    const SweepConfig config = raw.resolved();
    std::vector<std::pair<std::filesystem::path, std::string>> files;

    switch (config.mode) {
    case SweepMode::moments_sweep: {
        const auto rows = run_moments_sweep(config);
        std::ostringstream out;
        write_header(out, config, {"purity = Tr(rho_field^2)"});
        out << "r,mean_n,P0,P1,abs_aa,arg_aa,rho_ee,purity,tail_mass,cutoff\n";
        for (const auto& row : rows) {
            out << format_number(row.r) << ',' << format_number(row.mean_n) << ',' << format_number(row.p0) << ','
                << format_number(row.p1) << ',' << format_number(row.abs_aa) << ',' << format_number(row.arg_aa) << ','
                << format_number(row.rho_ee) << ',' << format_number(row.purity) << ','
                << format_number(row.tail_mass) << ',' << row.cutoff << '\n';
        }
        files.emplace_back(config.output_path, out.str());
        break;
    }
    case SweepMode::distribution: {
        for (const auto& rec : run_distribution(config)) {
            std::ostringstream out;
            write_header(out, config, {"r = " + format_number(rec.r), "cutoff = " + std::to_string(rec.cutoff),
                                       "guard = " + std::to_string(rec.guard), "tail_mass = " + format_number(rec.tail_mass)});
            out << "n,P\n";
            for (std::size_t n = 0; n < rec.probabilities.size(); ++n) {
                out << n << ',' << format_number(rec.probabilities[n]) << '\n';
            }
            files.emplace_back(per_point_path(config.output_path, rec.r), out.str());
        }
        break;
    }
    case SweepMode::wigner: {
        for (const auto& rec : run_wigner(config)) {
            std::ostringstream out;
            write_header(out, config, {"r = " + format_number(rec.r), "cutoff = " + std::to_string(rec.cutoff),
                                       "convention: alpha = (q + i p)/sqrt(2), integral W dq dp = 1",
                                       "layout: first row = p axis, first column = q axis",
                                       "integral = " + format_number(rec.moments.integral),
                                       "var_q = " + format_number(rec.moments.var_q),
                                       "var_p = " + format_number(rec.moments.var_p),
                                       "variance_ratio = " + format_number(rec.moments.variance_ratio())});
            out << "q\\p";
            for (double p : rec.grid.p_axis) out << ',' << format_number(p);
            out << '\n';
            for (std::size_t i = 0; i < rec.grid.q_axis.size(); ++i) {
                out << format_number(rec.grid.q_axis[i]);
                for (std::size_t j = 0; j < rec.grid.p_axis.size(); ++j) {
                    out << ',' << format_number(rec.grid.values(Eigen::Index(i), Eigen::Index(j)));
                }
                out << '\n';
            }
            files.emplace_back(per_point_path(config.output_path, rec.r, rec.g0), out.str());
        }
        break;
    }
    case SweepMode::bogoliubov_check: {
        const auto rows = run_bogoliubov_check(config);
        std::ostringstream out;
        write_header(out, config, {"pass threshold = " + format_number(kFrameAgreement)});
        out << "r,mean_n_lab,mean_n_bog,rho_ee_lab,rho_ee_bog,discrepancy,pass,cutoff\n";
        for (const auto& row : rows) {
            out << format_number(row.r) << ',' << format_number(row.mean_n_lab) << ',' << format_number(row.mean_n_bog)
                << ',' << format_number(row.rho_ee_lab) << ',' << format_number(row.rho_ee_bog) << ','
                << format_number(row.discrepancy) << ',' << (row.pass ? 1 : 0) << ',' << row.cutoff << '\n';
        }
        files.emplace_back(config.output_path, out.str());
        break;
    }
    }

    std::vector<std::filesystem::path> written;
    for (const auto& [path, contents] : files) {
        if (path == "-") {
            (stdout_sink ? *stdout_sink : std::cout) << contents;
            continue;
        }
        write_file(path, contents);
        written.push_back(path);
    }
    return written;
}

} // namespace sqcavity
