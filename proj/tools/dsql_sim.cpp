// Scenario-driven front end: parses scenario files, dispatches to the
// computation modules, evaluates grids (in parallel where cells are
// expensive), and writes CSV/JSON artifacts plus a run summary.

#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsql/bellstats.hpp"
#include "dsql/cowsim.hpp"
#include "dsql/decoherence.hpp"
#include "dsql/homsim.hpp"
#include "dsql/linkbudget.hpp"
#include "dsql/physcore.hpp"
#include "dsql/relorbit.hpp"
#include "dsql/rng.hpp"
#include "dsql/teleportsim.hpp"
#include "dsql/version.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double k_ev = 1.602176634e-19; // [J]

/// Scenario-content problem: reported with context, exits with status 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tabular results

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_value(row[c]);
        }
        out += '\n';
    }
    return out;
}

json to_json_rows(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            obj[t.columns[c]] = row[c];
        }
        rows.push_back(obj);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Parsing helpers

const json& require_field(const json& j, const std::string& key,
                          const std::string& context) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ValidationError(context + ": missing field '" + key + "'");
    }
    return *it;
}

double require_number(const json& j, const std::string& key,
                      const std::string& context) {
    const json& v = require_field(j, key, context);
    if (!v.is_number()) {
        throw ValidationError(context + ": field '" + key +
                              "' must be a number");
    }
    return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) {
        throw ValidationError("field '" + key + "' must be a number");
    }
    return it->get<double>();
}

std::string string_or(const json& j, const std::string& key,
                      const std::string& fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_string()) {
        throw ValidationError("field '" + key + "' must be a string");
    }
    return it->get<std::string>();
}

bool bool_or(const json& j, const std::string& key, bool fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) {
        throw ValidationError("field '" + key + "' must be a boolean");
    }
    return it->get<bool>();
}

/// Axis definition {min, max, points, scale}; scale is linear or log.
std::vector<double> parse_grid(const json& parent, const std::string& key) {
    const json& g = require_field(parent, key, "scenario");
    if (!g.is_object()) {
        throw ValidationError("grid '" + key + "' must be an object");
    }
    const double lo = require_number(g, "min", "grid '" + key + "'");
    const double hi = require_number(g, "max", "grid '" + key + "'");
    const double points_raw = require_number(g, "points", "grid '" + key + "'");
    const auto points = static_cast<long long>(points_raw);
    const std::string scale = string_or(g, "scale", "linear");
    if (points < 1 || static_cast<double>(points) != points_raw) {
        throw ValidationError("grid '" + key +
                              "': points must be a positive integer");
    }
    if (lo > hi) {
        throw ValidationError("grid '" + key + "': min > max");
    }
    if (points > 1 && lo == hi) {
        throw ValidationError("grid '" + key +
                              "': degenerate span with multiple points");
    }
    if (scale != "linear" && scale != "log") {
        throw ValidationError("grid '" + key +
                              "': scale must be 'linear' or 'log'");
    }
    if (scale == "log" && lo <= 0.0) {
        throw ValidationError("grid '" + key +
                              "': log scale requires min > 0");
    }
    std::vector<double> axis;
    axis.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        axis.push_back(lo);
        return axis;
    }
    const double n1 = static_cast<double>(points - 1);
    for (long long i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / n1;
        if (scale == "linear") {
            axis.push_back(lo + f * (hi - lo));
        } else {
            axis.push_back(std::exp(std::log(lo) +
                                    f * (std::log(hi) - std::log(lo))));
        }
    }
    axis.front() = lo;
    axis.back() = hi;
    return axis;
}

dsql::linkbudget::OpticalTerminal parse_terminal(const json& parent,
                                                 const std::string& key) {
    const json& t = require_field(parent, key, "scenario");
    dsql::linkbudget::OpticalTerminal out{};
    out.aperture = require_number(t, "aperture_m", "terminal '" + key + "'");
    out.m_squared = number_or(t, "m_squared", 1.0);
    return out;
}

dsql::linkbudget::LossFactors parse_losses(const json& parent) {
    dsql::linkbudget::LossFactors out{1.0, 1.0, 1.0, 1.0, 1.0};
    auto it = parent.find("losses");
    if (it == parent.end()) return out;
    const json& l = *it;
    out.eta_rx = number_or(l, "eta_rx", 1.0);
    out.eta_d = number_or(l, "eta_detector", 1.0);
    out.eta_tx = number_or(l, "eta_tx", 1.0);
    out.eta_atm = number_or(l, "eta_atm", 1.0);
    out.eta_margin = number_or(l, "eta_margin", 1.0);
    return out;
}

dsql::linkbudget::SourceSpec parse_source(const json& parent) {
    const json& s = require_field(parent, "source", "scenario");
    dsql::linkbudget::SourceSpec out{};
    out.f_clock = require_number(s, "clock_rate_hz", "source");
    out.p1 = number_or(s, "pair_probability", 1.0);
    out.fidelity = number_or(s, "fidelity", 1.0);
    return out;
}

dsql::relorbit::Body parse_body(const json& parent) {
    const std::string name = string_or(parent, "body", "earth");
    if (name == "earth") return dsql::relorbit::Body::earth();
    if (name == "moon") return dsql::relorbit::Body::moon();
    throw ValidationError("body must be 'earth' or 'moon'");
}

/// Bandwidth axis: accepts sigma in rad/s, or in Hz (converted by 2 pi).
std::vector<double> parse_sigma_grid(const json& parent) {
    if (parent.contains("sigma_grid_rad_s")) {
        return parse_grid(parent, "sigma_grid_rad_s");
    }
    if (parent.contains("sigma_grid_hz")) {
        std::vector<double> grid = parse_grid(parent, "sigma_grid_hz");
        for (double& s : grid) s *= 2.0 * dsql::phys::pi;
        return grid;
    }
    throw ValidationError(
        "scenario: missing field 'sigma_grid_rad_s' (or 'sigma_grid_hz')");
}

double parse_sigma_value(const json& parent, const std::string& context) {
    if (parent.contains("sigma_rad_s")) {
        return require_number(parent, "sigma_rad_s", context);
    }
    if (parent.contains("sigma_hz")) {
        return 2.0 * dsql::phys::pi * require_number(parent, "sigma_hz",
                                                     context);
    }
    throw ValidationError(context +
                          ": missing field 'sigma_rad_s' (or 'sigma_hz')");
}

// ---------------------------------------------------------------------------
// Parallel grid evaluation

int resolve_threads(int flag_threads) {
    if (flag_threads > 0) return flag_threads;
    if (const char* env = std::getenv("DSQL_SIM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(0..n-1) on a worker pool. Cells must be pure given their index;
/// assembly order is the caller's (results go into index-addressed slots).
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(std::max(threads, 1), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Experiment handlers

struct RunContext {
    std::uint64_t seed;
    bool seed_given;
    int threads;
    json results; ///< Extra scalars surfaced in the summary
};

Table run_clock(const json& s, RunContext& ctx) {
    const auto body = parse_body(s);
    Table t;
    if (s.contains("semi_major_axis_km")) {
        const double a = require_number(s, "semi_major_axis_km", "clock") * 1e3;
        const double e = number_or(s, "eccentricity", 0.0);
        const auto samples =
            static_cast<int>(number_or(s, "samples", 64.0));
        const auto orbit = dsql::relorbit::OrbitSpec::elliptic(a, a, e);
        const auto profile = dsql::relorbit::epsilon_profile(orbit, body,
                                                             samples);
        t.columns = {"true_anomaly_rad", "radius_km", "eps_satellite",
                     "eps_observatory", "rate_difference"};
        for (const auto& sample : profile) {
            const double r = a * (1.0 - e * e) /
                             (1.0 + e * std::cos(sample.true_anomaly));
            t.rows.push_back({sample.true_anomaly, r / 1e3,
                              sample.eps_satellite, sample.eps_observatory,
                              sample.net_rate});
        }
    } else {
        const auto altitudes = parse_grid(s, "altitude_grid_km");
        t.columns = {"altitude_km", "radius_km", "eps_satellite",
                     "eps_observatory", "rate_difference"};
        for (double h_km : altitudes) {
            const double r = body.radius + h_km * 1e3;
            const double eps_sat =
                dsql::relorbit::epsilon_satellite_circular(r, body);
            const double eps_obs = dsql::relorbit::epsilon_observatory(body);
            t.rows.push_back({h_km, r / 1e3, eps_sat, eps_obs,
                              eps_obs - eps_sat});
        }
    }
    ctx.results["cancellation_radius_m"] =
        dsql::relorbit::cancellation_radius(body);
    return t;
}

Table run_link(const json& s, RunContext&) {
    const auto tx = parse_terminal(s, "tx");
    const auto rx = parse_terminal(s, "rx");
    const double lambda = require_number(s, "wavelength_nm", "link") * 1e-9;
    const auto losses = parse_losses(s);
    const auto source = parse_source(s);
    const auto ranges = parse_grid(s, "range_grid_km");
    Table t;
    t.columns = {"range_km",        "efficiency",
                 "far_field_efficiency", "far_field_valid",
                 "single_rate_hz",  "one_channel_rate_hz",
                 "pair_rate_hz"};
    for (double r_km : ranges) {
        const double range = r_km * 1e3;
        const double eta = dsql::linkbudget::link_efficiency(tx, rx, range,
                                                             lambda, losses);
        const auto far = dsql::linkbudget::link_efficiency_far_field(
            tx, rx, range, lambda, losses);
        t.rows.push_back(
            {r_km, eta, far.eta, far.far_field_valid ? 1.0 : 0.0,
             dsql::linkbudget::single_photon_rate(source, eta),
             dsql::linkbudget::entangled_one_channel_rate(source, eta),
             dsql::linkbudget::entangled_pair_rate(source, eta, eta)});
    }
    return t;
}

Table run_bell(const json& s, RunContext& ctx) {
    const auto pairs = parse_grid(s, "pairs_grid");
    const auto p_grid = parse_grid(s, "p_grid");
    const bool simulate = s.contains("simulate");
    long long trials = 0;
    if (simulate) {
        if (!ctx.seed_given) {
            throw ValidationError(
                "bell: 'simulate' requested without a seed");
        }
        trials = static_cast<long long>(require_number(
            s.at("simulate"), "trials_per_cell", "bell simulate"));
    }
    Table t;
    t.columns = {"n_pairs", "p", "expected_s", "sigma_s", "n_sigma"};
    if (simulate) t.columns.push_back("simulated_s");
    std::uint64_t cell = 0;
    for (double n : pairs) {
        for (double p : p_grid) {
            std::vector<double> row{n, p, dsql::bellstats::expected_s(p),
                                    dsql::bellstats::sigma_s(n, p),
                                    dsql::bellstats::n_sigma(n, p)};
            if (simulate) {
                const auto counts = dsql::bellstats::simulate_bell_counts(
                    p, trials, dsql::rng::cell_seed(ctx.seed, cell));
                row.push_back(dsql::bellstats::chsh_s(counts));
            }
            t.rows.push_back(std::move(row));
            ++cell;
        }
    }
    return t;
}

Table run_bell_scan(const json& s, RunContext&) {
    dsql::bellstats::BellScanScenario sc{};
    sc.tx = parse_terminal(s, "tx");
    sc.rx = parse_terminal(s, "rx");
    sc.lambda = require_number(s, "wavelength_nm", "bell-scan") * 1e-9;
    sc.losses = parse_losses(s);
    sc.source = parse_source(s);
    sc.body = parse_body(s);
    sc.theta_m = number_or(s, "theta_m_deg", 0.0) * dsql::phys::pi / 180.0;
    std::vector<double> y_grid;
    std::string y_column;
    if (s.contains("altitude_grid_km")) {
        sc.y_is_altitude = true;
        sc.fixed_integration_time = 0.0;
        y_grid = parse_grid(s, "altitude_grid_km");
        y_column = "altitude_km";
    } else {
        sc.y_is_altitude = false;
        sc.fixed_integration_time =
            require_number(s, "integration_time_s", "bell-scan");
        y_grid = parse_grid(s, "range_grid_km");
        y_column = "range_km";
    }
    for (double& y : y_grid) y *= 1e3;
    const auto p_grid = parse_grid(s, "p_grid");
    const auto cells = dsql::bellstats::bell_mission_scan(p_grid, y_grid, sc);
    Table t;
    t.columns = {y_column, "p", "pairs", "n_sigma"};
    for (const auto& c : cells) {
        t.rows.push_back({c.y / 1e3, c.p, c.pairs, c.n_sigma});
    }
    return t;
}

Table run_cow_scan(const json& s, RunContext& ctx) {
    dsql::cowsim::CowScanScenario sc{};
    sc.tx = parse_terminal(s, "tx");
    sc.rx = parse_terminal(s, "rx");
    sc.lambda = require_number(s, "wavelength_nm", "cow-scan") * 1e-9;
    sc.losses = parse_losses(s);
    sc.source = parse_source(s);
    sc.body = parse_body(s);
    sc.theta_m = number_or(s, "theta_m_deg", 0.0) * dsql::phys::pi / 180.0;
    const json& model = require_field(s, "signal", "cow-scan");
    sc.model.sigma = parse_sigma_value(model, "signal");
    sc.model.p = require_number(model, "p", "signal");
    sc.model.fidelity = number_or(model, "fidelity", 1.0);
    sc.model.dt_r = number_or(model, "dt_r_ns", 1.0) * 1e-9;
    sc.ell = require_number(s, "ell_km", "cow-scan") * 1e3;
    sc.refractive_index = number_or(s, "refractive_index", 1.0);
    sc.altitude_dependent_g = bool_or(s, "altitude_dependent_g", true);
    sc.g = number_or(s, "g_m_s2", dsql::phys::constants.g0);
    auto altitudes = parse_grid(s, "altitude_grid_km");
    for (double& h : altitudes) h *= 1e3;
    const auto result = dsql::cowsim::alpha_error_scan(altitudes, sc);
    Table t;
    t.columns = {"altitude_km", "n_photons", "phi_gr_rad", "dphi_opt_rad",
                 "delta_alpha", "feasible"};
    for (const auto& c : result.cells) {
        t.rows.push_back({c.altitude / 1e3, c.n_photons, c.phi_gr, c.dphi_opt,
                          c.delta_alpha, c.feasible ? 1.0 : 0.0});
    }
    ctx.results["argmin_altitude_km"] = result.argmin_altitude / 1e3;
    ctx.results["min_delta_alpha"] = result.min_delta_alpha;
    return t;
}

Table run_hom_scan(const json& s, RunContext& ctx) {
    dsql::homsim::HomScanScenario sc{};
    sc.tx = parse_terminal(s, "tx");
    sc.rx = parse_terminal(s, "rx");
    sc.lambda1 = require_number(s, "wavelength_nm", "hom-scan") * 1e-9;
    sc.lambda2 = number_or(s, "wavelength2_nm",
                           require_number(s, "wavelength_nm", "hom-scan")) *
                 1e-9;
    sc.losses = parse_losses(s);
    sc.source = parse_source(s);
    sc.body = parse_body(s);
    sc.theta_m = number_or(s, "theta_m_deg", 0.0) * dsql::phys::pi / 180.0;
    sc.p_quality = require_number(s, "p_quality", "hom-scan");
    sc.ell = require_number(s, "ell_km", "hom-scan") * 1e3;
    const std::string mode_name = string_or(s, "mode", "degenerate");
    dsql::homsim::HomScanMode mode;
    if (mode_name == "degenerate") {
        mode = dsql::homsim::HomScanMode::degenerate;
    } else if (mode_name == "nondegenerate") {
        mode = dsql::homsim::HomScanMode::nondegenerate;
    } else {
        throw ValidationError(
            "hom-scan: mode must be 'degenerate' or 'nondegenerate'");
    }
    const auto sigma_grid = parse_sigma_grid(s);
    auto altitudes = parse_grid(s, "altitude_grid_km");
    for (double& h : altitudes) h *= 1e3;
    const auto result =
        dsql::homsim::hom_alpha_scan(sigma_grid, altitudes, mode, sc);
    Table t;
    t.columns = {"sigma_rad_s", "altitude_km", "n_pairs", "dtau_opt_s",
                 "delta_alpha", "feasible"};
    for (const auto& c : result.cells) {
        t.rows.push_back({c.sigma, c.altitude / 1e3, c.n_pairs, c.dtau_opt,
                          c.delta_alpha, c.feasible ? 1.0 : 0.0});
    }
    ctx.results["argmin_sigma_rad_s"] = result.argmin_sigma;
    ctx.results["argmin_altitude_km"] = result.argmin_altitude / 1e3;
    ctx.results["min_delta_alpha"] = result.min_delta_alpha;
    return t;
}

Table run_teleport_map(const json& s, RunContext& ctx) {
    if (!ctx.seed_given) {
        throw ValidationError("teleport-map: seed is mandatory");
    }
    const auto p_grid = parse_grid(s, "p_grid");
    const auto n_grid = parse_grid(s, "events_grid");
    const auto reps = static_cast<int>(number_or(s, "reps", 10.0));
    const std::size_t n_cells = p_grid.size() * n_grid.size();
    std::vector<dsql::teleportsim::FidelityCell> cells(n_cells);
    parallel_for(n_cells, ctx.threads, [&](std::size_t i) {
        const double p = p_grid[i / n_grid.size()];
        const double n = n_grid[i % n_grid.size()];
        cells[i] = dsql::teleportsim::fidelity_map_cell(
            p, n, reps, ctx.seed, static_cast<std::uint64_t>(i));
    });
    Table t;
    t.columns = {"p",
                 "n_total",
                 "mean_fidelity",
                 "stddev_fidelity",
                 "mean_iterations",
                 "all_converged"};
    for (const auto& c : cells) {
        t.rows.push_back({c.p, c.n_total, c.mean_fidelity, c.stddev_fidelity,
                          c.mean_iterations, c.all_converged ? 1.0 : 0.0});
    }
    return t;
}

Table run_decohere(const json& s, RunContext&) {
    dsql::decoherence::MassiveSystem sys{};
    sys.m = require_number(s, "mass_amu", "decohere") *
            dsql::phys::constants.amu;
    sys.r = require_number(s, "radius_nm", "decohere") * 1e-9;
    sys.v = require_number(s, "velocity_m_s", "decohere");
    sys.l = require_number(s, "path_length_km", "decohere") * 1e3;
    const double ell_cut = number_or(s, "cutoff_angstrom", 0.5) * 1e-10;
    const double theta_over_tp = number_or(s, "theta_over_tp", 1e-5);
    const double theta = theta_over_tp * dsql::phys::constants.T_P;
    const double tau = dsql::decoherence::abh_tau_from_theta(theta);
    const double target = number_or(s, "dephasing_target", 1.0);

    Table t;
    t.columns = {"gamma_dp_per_s",
                 "dp_dephasing",
                 "dp_mass_unit_dephasing_amu",
                 "abh_tau_s",
                 "abh_dephasing",
                 "abh_theta_unit_dephasing_over_tp"};
    std::vector<double> row{
        dsql::decoherence::gamma_dp(sys, ell_cut),
        dsql::decoherence::dp_dephasing(sys),
        dsql::decoherence::dp_mass_for_dephasing(target, sys.r, sys.v, sys.l) /
            dsql::phys::constants.amu,
        tau,
        dsql::decoherence::abh_dephasing(sys, tau),
        dsql::decoherence::abh_theta_for_dephasing(sys, target) /
            dsql::phys::constants.T_P};
    if (s.contains("photon")) {
        const json& ph = s.at("photon");
        const double ph_theta =
            require_number(ph, "theta_over_tp", "photon") *
            dsql::phys::constants.T_P;
        const double energy =
            require_number(ph, "energy_ev", "photon") * k_ev;
        const double length =
            require_number(ph, "path_length_km", "photon") * 1e3;
        const double variance =
            dsql::decoherence::photon_visibility_loss(ph_theta, energy,
                                                      length);
        t.columns.push_back("photon_phase_variance");
        t.columns.push_back("photons_required");
        row.push_back(variance);
        row.push_back(
            dsql::decoherence::photons_for_visibility(std::sqrt(variance)));
    }
    t.rows.push_back(std::move(row));
    return t;
}

Table run_human_bell(const json& s, RunContext&) {
    dsql::relorbit::HumanBellTiming timing{};
    timing.t_question = require_number(s, "t_question_s", "human-bell");
    timing.t_choice = require_number(s, "t_choice_s", "human-bell");
    timing.t_transmit = require_number(s, "t_transmit_s", "human-bell");
    timing.source_distance = number_or(s, "source_distance_km", 0.0) * 1e3;
    const auto geo = dsql::relorbit::human_bell_geometry(timing);
    Table t;
    t.columns = {"min_source_distance_m", "fraction_of_earth_moon",
                 "rate_gain_vs_full", "rate_gain_vs_midway"};
    t.rows.push_back({geo.min_source_distance, geo.fraction_of_earth_moon,
                      geo.rate_gain_vs_full, geo.rate_gain_vs_midway});
    return t;
}

Table dispatch(const std::string& experiment, const json& s,
               RunContext& ctx) {
    if (experiment == "clock") return run_clock(s, ctx);
    if (experiment == "link") return run_link(s, ctx);
    if (experiment == "bell") return run_bell(s, ctx);
    if (experiment == "bell-scan") return run_bell_scan(s, ctx);
    if (experiment == "cow-scan") return run_cow_scan(s, ctx);
    if (experiment == "hom-scan") return run_hom_scan(s, ctx);
    if (experiment == "teleport-map") return run_teleport_map(s, ctx);
    if (experiment == "decohere") return run_decohere(s, ctx);
    if (experiment == "human-bell") return run_human_bell(s, ctx);
    throw ValidationError("unknown experiment '" + experiment + "'");
}

// ---------------------------------------------------------------------------
// Run plumbing

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

struct RunOptions {
    std::string file;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    std::string output_dir;
    std::string format = "csv";
};

int run_scenario(const RunOptions& opt) {
    std::ifstream in(opt.file, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open '" << opt.file << "'\n";
        return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    json scenario;
    try {
        scenario = json::parse(text);
    } catch (const json::parse_error& e) {
        std::cerr << "error: " << opt.file << ":"
                  << line_of_byte(text, e.byte) << ": " << e.what() << "\n";
        return 1;
    }

    const auto start = std::chrono::steady_clock::now();
    std::string name;
    Table table;
    RunContext ctx{};
    std::string experiment;
    try {
        if (!scenario.is_object()) {
            throw ValidationError("scenario root must be an object");
        }
        name = string_or(scenario, "name", "");
        if (name.empty()) {
            throw ValidationError("scenario: missing field 'name'");
        }
        for (char c : name) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
                throw ValidationError(
                    "scenario: name must be an identifier "
                    "(letters, digits, underscores)");
            }
        }
        const json& exp_field =
            require_field(scenario, "experiment", "scenario");
        if (!exp_field.is_string()) {
            throw ValidationError("scenario: 'experiment' must be a string");
        }
        experiment = exp_field.get<std::string>();

        ctx.seed_given = opt.seed_given || scenario.contains("seed");
        ctx.seed = opt.seed_given
                       ? opt.seed
                       : static_cast<std::uint64_t>(
                             number_or(scenario, "seed", 0.0));
        ctx.threads = resolve_threads(opt.threads);
        ctx.results = json::object();

        table = dispatch(experiment, scenario, ctx);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << opt.file << ": " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << opt.file << ": " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    }

    const fs::path out_dir = !opt.output_dir.empty()
                                 ? fs::path(opt.output_dir)
                                 : fs::path(string_or(scenario, "output", "."));
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec && !fs::exists(out_dir)) {
        std::cerr << "error: cannot create output directory '"
                  << out_dir.string() << "'\n";
        return 1;
    }

    fs::path data_path;
    if (opt.format == "csv") {
        data_path = out_dir / (name + ".csv");
        std::ofstream out(data_path, std::ios::binary);
        out << to_csv(table);
    } else {
        data_path = out_dir / (name + ".json");
        std::ofstream out(data_path, std::ios::binary);
        out << to_json_rows(table).dump(2) << "\n";
    }

    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    json summary = {
        {"name", name},
        {"experiment", experiment},
        {"toolkit_version", dsql::k_toolkit_version},
        {"scenario_hash", hex64(fnv1a64(text))},
        {"seed", ctx.seed},
        {"threads", ctx.threads},
        {"wall_time_s", elapsed},
        {"rows", table.rows.size()},
        {"data_file", data_path.filename().string()},
    };
    if (!ctx.results.empty()) {
        summary["results"] = ctx.results;
    }
    {
        std::ofstream out(out_dir / (name + ".summary.json"),
                          std::ios::binary);
        out << summary.dump(2) << "\n";
    }
    std::cout << data_path.string() << "\n";
    return 0;
}

struct CatalogEntry {
    const char* name;
    const char* experiment;
    const char* note;
};

constexpr CatalogEntry k_catalog[] = {
    {"bell_reference", "bell",
     "CHSH significance over a pairs x purity grid; the (500, 0.85) cell "
     "is the 2.83-sigma anchor"},
    {"bell_orbit_scan", "bell-scan",
     "Bell-violation significance vs orbit altitude and state purity with "
     "pass-limited integration times"},
    {"clock_leo_geo", "clock",
     "Circular-orbit clock corrections from LEO to GEO, with the "
     "cancellation radius in the summary"},
    {"clock_molniya", "clock",
     "Elliptic-orbit clock-correction profile over one Molniya revolution"},
    {"link_earth_diameter", "link",
     "Downlink efficiency and pair rates out to an Earth-diameter "
     "baseline"},
    {"cow_fig4", "cow-scan",
     "Gravitational-redshift test error vs orbit altitude for a "
     "delay-line interferometer; optimal altitude in the summary"},
    {"hom_fig8_degenerate", "hom-scan",
     "Two-photon interference timing test, both photons at 780 nm: error "
     "vs bandwidth and altitude"},
    {"hom_fig9_nondegenerate", "hom-scan",
     "Two-photon interference timing test, 780/1550 nm channels: error vs "
     "bandwidth and altitude"},
    {"teleport_fig12", "teleport-map",
     "Tomography fidelity map over Werner parameter and event number "
     "(Monte Carlo, seeded)"},
    {"decohere_microsphere", "decohere",
     "Decoherence-rate report for a levitated-microsphere path"},
    {"human_bell_l3", "human-bell",
     "Human-choice Bell timing geometry: minimum source distance and "
     "pair-rate gains"},
};

int list_scenarios() {
    for (const auto& entry : k_catalog) {
        std::printf("%-24s %-13s %s\n", entry.name, entry.experiment,
                    entry.note);
    }
    std::printf("%zu bundled scenarios\n", std::size(k_catalog));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic mission-design calculator suite"};
    app.require_subcommand(1);

    RunOptions opt;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("file", opt.file, "Scenario file (JSON)")->required();
    auto* seed_opt = run->add_option("--seed", opt.seed,
                                     "Override the scenario seed");
    run->add_option("--threads", opt.threads,
                    "Worker threads (default: logical cores, or "
                    "DSQL_SIM_THREADS)");
    run->add_option("--output-dir", opt.output_dir,
                    "Override the scenario output directory");
    run->add_option("--format", opt.format, "Data format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* list = app.add_subcommand("list", "List bundled scenarios");
    auto* version = app.add_subcommand("version", "Print toolkit version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (list->parsed()) {
        return list_scenarios();
    }
    if (version->parsed()) {
        std::printf("dsql_sim %s\n", dsql::k_toolkit_version);
        return 0;
    }
    opt.seed_given = seed_opt->count() > 0;
    return run_scenario(opt);
}
