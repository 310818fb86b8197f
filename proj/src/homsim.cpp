#include "dsql/homsim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dsql/optimize.hpp"
#include "dsql/physcore.hpp"

namespace dsql::homsim {

namespace {

constexpr double k_infinite_error = std::numeric_limits<double>::infinity();
constexpr double k_sigma_cap = 4.7e13; ///< Hardware bandwidth cap [rad/s]

double envelope(double tau, double sigma) {
    const double st = sigma * tau;
    return std::exp(-2.0 * st * st);
}

} // namespace

void HomSource::validate() const {
    if (!(omega1 > 0.0) || !(omega2 > 0.0) || !(sigma > 0.0)) {
        throw std::domain_error("frequencies and bandwidth must be positive");
    }
    if (degenerate != (omega1 == omega2)) {
        throw std::domain_error(
            "degenerate flag inconsistent with frequencies");
    }
}

void HomGeometry::validate() const {
    if (!(ell > 0.0)) {
        throw std::domain_error("delay length must be positive");
    }
    if (!(std::abs(delta_ell) < 1e-3 * ell)) {
        throw std::domain_error("length mismatch must be small against ell");
    }
}

double hom_dip_degenerate(double tau, double sigma) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("bandwidth must be positive");
    }
    return 0.5 * (1.0 - envelope(tau, sigma));
}

double hom_entangled(double tau, double sigma, double domega) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("bandwidth must be positive");
    }
    return 0.5 * (1.0 - std::cos(domega * tau) * envelope(tau, sigma));
}

double noisy_coincidence(double tau, double sigma, double domega, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("quality factor must lie in [0, 1]");
    }
    return p * hom_entangled(tau, sigma, domega) + 0.5 * (1.0 - p);
}

double quality_factor_hom(double noise_rate, double dt_r, double fidelity) {
    if (!(noise_rate >= 0.0) || !(dt_r >= 0.0)) {
        throw std::domain_error("noise rate and window must be non-negative");
    }
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
        throw std::domain_error("fidelity must lie in [0, 1]");
    }
    const double clean = 1.0 - noise_rate * dt_r;
    if (clean <= 0.0) {
        throw std::domain_error("noise saturates the detection window");
    }
    return clean * clean * fidelity;
}

double relativistic_time_shift(const HomGeometry& geo) {
    geo.validate();
    const double c = phys::constants.c;
    if (!(std::abs(geo.v_g_los) < c) || !(std::abs(geo.v_s_los) < c)) {
        throw std::domain_error("line-of-sight speeds must be below c");
    }
    const double doppler = (1.0 + geo.v_s_los / c) / (1.0 + geo.v_g_los / c);
    const double rate = 1.0 + (geo.u_s - geo.u_g) / phys::c_squared -
                        (geo.v_s_sq - geo.v_g_sq) / (2.0 * phys::c_squared);
    return geo.ell / c * (doppler * rate - 1.0);
}

double total_time_shift(const HomGeometry& geo) {
    geo.validate();
    const double c = phys::constants.c;
    const double tau_gr =
        geo.ell / c *
        ((geo.u_s - geo.u_g) / phys::c_squared -
         (geo.v_s_sq - geo.v_g_sq) / (2.0 * phys::c_squared));
    const double tau_doppler =
        geo.ell / c * (geo.v_s_los - geo.v_g_los) / c;
    return tau_gr + geo.delta_ell / c + geo.tau_c + tau_doppler;
}

double hom_phase_shift(double domega, double tau_rel) {
    return domega * tau_rel;
}

double timing_error(double tau, double sigma, double domega, double p) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("bandwidth must be positive");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("quality factor must lie in [0, 1]");
    }
    const double e = envelope(tau, sigma);
    const double beat = domega * tau;
    const double cos_beat = std::cos(beat);
    const double slope = 4.0 * tau * sigma * sigma * cos_beat +
                         domega * std::sin(beat);
    const double denom = p * e * std::abs(slope);
    if (denom == 0.0) {
        return k_infinite_error;
    }
    const double pe_cos = p * e * cos_beat;
    return std::sqrt(1.0 - pe_cos * pe_cos) / denom;
}

OptimalTiming optimal_timing_error(double sigma, double domega, double p) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("bandwidth must be positive");
    }
    if (!(domega >= 0.0)) {
        throw std::domain_error("frequency offset must be non-negative");
    }
    double upper = 6.0 / sigma;
    if (domega > 0.0) {
        upper = std::max(upper, 4.0 * phys::pi / domega);
    }
    const auto result = optimize::minimize_grid_golden(
        [&](double tau) { return timing_error(tau, sigma, domega, p); }, 0.0,
        upper);
    return {result.x, result.value};
}

double alpha_error_hom(double dtau, double ell, double delta_u, double n_c) {
    if (!(n_c > 0.0)) {
        throw std::domain_error("coincidence count must be positive");
    }
    if (!(ell > 0.0)) {
        throw std::domain_error("delay length must be positive");
    }
    if (delta_u == 0.0) {
        throw std::domain_error(
            "zero potential difference carries no redshift signal");
    }
    const double signal = ell / phys::constants.c *
                          std::abs(delta_u) / phys::c_squared;
    return std::abs(dtau) / (signal * std::sqrt(n_c));
}

HomScanResult hom_alpha_scan(const std::vector<double>& sigma_grid,
                             const std::vector<double>& altitude_grid,
                             HomScanMode mode,
                             const HomScanScenario& scenario) {
    if (sigma_grid.empty() || altitude_grid.empty()) {
        throw std::domain_error("scan grids must be non-empty");
    }
    scenario.body.validate();
    if (!(scenario.lambda1 > 0.0) || !(scenario.lambda2 > 0.0)) {
        throw std::domain_error("wavelengths must be positive");
    }
    if (!(scenario.p_quality > 0.0 && scenario.p_quality <= 1.0)) {
        throw std::domain_error("quality factor must lie in (0, 1]");
    }
    if (!(scenario.ell > 0.0)) {
        throw std::domain_error("delay length must be positive");
    }
    for (double sigma : sigma_grid) {
        if (!(sigma > 0.0) || sigma > k_sigma_cap) {
            throw std::domain_error(
                "bandwidth outside the supported (0, 4.7e13] rad/s range");
        }
    }

    const double lambda2 = mode == HomScanMode::degenerate
                               ? scenario.lambda1
                               : scenario.lambda2;
    const double domega =
        mode == HomScanMode::degenerate
            ? 0.0
            : std::abs(phys::wavelength_to_angular_frequency(scenario.lambda1) -
                       phys::wavelength_to_angular_frequency(lambda2));
    const double mu = phys::constants.G * scenario.body.mass;

    HomScanResult result;
    result.cells.reserve(sigma_grid.size() * altitude_grid.size());
    result.argmin_sigma = sigma_grid.front();
    result.argmin_altitude = altitude_grid.front();
    result.min_delta_alpha = k_infinite_error;

    for (double h : altitude_grid) {
        if (!(h > 0.0)) {
            throw std::domain_error("scan altitudes must be positive");
        }
        double n_pairs = 0.0;
        try {
            const double integration = relorbit::integration_time(
                relorbit::PassGeometry{scenario.body.radius + h,
                                       scenario.theta_m, scenario.body});
            const double eta1 = linkbudget::link_efficiency(
                scenario.tx, scenario.rx, h, scenario.lambda1,
                scenario.losses);
            const double eta2 = linkbudget::link_efficiency(
                scenario.tx, scenario.rx, h, lambda2, scenario.losses);
            n_pairs = linkbudget::entangled_pair_rate(scenario.source, eta1,
                                                      eta2) *
                      integration;
        } catch (const std::domain_error&) {
            n_pairs = 0.0;
        }
        const double delta_u = mu * (1.0 / scenario.body.radius -
                                     1.0 / (scenario.body.radius + h));

        for (double sigma : sigma_grid) {
            const OptimalTiming timing =
                optimal_timing_error(sigma, domega, scenario.p_quality);
            HomScanCell cell{sigma,       h, n_pairs, timing.dtau_opt,
                             k_infinite_error, false};
            if (n_pairs > 0.0 && std::isfinite(timing.dtau_opt)) {
                cell.delta_alpha = alpha_error_hom(
                    timing.dtau_opt, scenario.ell, delta_u, n_pairs);
                cell.feasible = true;
                if (cell.delta_alpha < result.min_delta_alpha) {
                    result.min_delta_alpha = cell.delta_alpha;
                    result.argmin_sigma = sigma;
                    result.argmin_altitude = h;
                }
            }
            result.cells.push_back(cell);
        }
    }
    return result;
}

} // namespace dsql::homsim
