#include "dsql/cowsim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dsql/optimize.hpp"
#include "dsql/physcore.hpp"

namespace dsql::cowsim {

namespace {

constexpr double k_infinite_error = std::numeric_limits<double>::infinity();

/// Bandwidth envelope e^{-2 sigma^2 tau^2} with tau = phi/omega0.
double envelope(double phi, double sigma, double omega0) {
    const double ratio = sigma * phi / omega0;
    return std::exp(-2.0 * ratio * ratio);
}

} // namespace

void CowInterferometer::validate() const {
    if (!(lambda > 0.0) || !(ell > 0.0)) {
        throw std::domain_error("wavelength and delay length must be positive");
    }
    if (!(h >= 0.0)) {
        throw std::domain_error("altitude difference must be non-negative");
    }
    const double expected = phys::wavelength_to_angular_frequency(lambda);
    if (std::abs(omega0 - expected) > 1e-12 * expected) {
        throw std::domain_error(
            "central frequency inconsistent with wavelength");
    }
}

CowInterferometer make_interferometer(double lambda, double h, double ell,
                                      double g, double theta, double alpha) {
    CowInterferometer ifo{lambda,
                          phys::wavelength_to_angular_frequency(lambda),
                          h,
                          ell,
                          g,
                          theta,
                          alpha};
    ifo.validate();
    return ifo;
}

void CowSignalModel::validate() const {
    if (!(sigma > 0.0)) {
        throw std::domain_error("bandwidth must be positive");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("quality factor must lie in [0, 1]");
    }
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
        throw std::domain_error("fidelity must lie in [0, 1]");
    }
    if (!(dt_r >= 0.0)) {
        throw std::domain_error("timing window must be non-negative");
    }
}

double gravitational_phase(const CowInterferometer& ifo) {
    ifo.validate();
    return (1.0 + ifo.alpha) * (2.0 * phys::pi / ifo.lambda) * ifo.g * ifo.h *
           ifo.ell / phys::c_squared;
}

double gravitational_phase_from_potential(const CowInterferometer& ifo,
                                          double delta_u) {
    ifo.validate();
    return (1.0 + ifo.alpha) * (2.0 * phys::pi / ifo.lambda) * delta_u *
           ifo.ell / phys::c_squared;
}

double doppler_phase(double lambda, double ell, double v) {
    if (!(lambda > 0.0) || !(ell > 0.0)) {
        throw std::domain_error("wavelength and delay length must be positive");
    }
    return (2.0 * phys::pi / lambda) * ell * v / phys::constants.c;
}

double detection_probability(double phi, const CowSignalModel& model,
                             const CowInterferometer& ifo) {
    model.validate();
    ifo.validate();
    const double e = envelope(phi, model.sigma, ifo.omega0);
    return 0.5 - 0.5 * model.p * e * std::cos(phi);
}

double phase_error(double phi, const CowSignalModel& model,
                   const CowInterferometer& ifo) {
    model.validate();
    ifo.validate();
    const double e = envelope(phi, model.sigma, ifo.omega0);
    const double cos_phi = std::cos(phi);
    const double slope =
        4.0 * model.sigma * model.sigma * (phi / (ifo.omega0 * ifo.omega0)) *
            cos_phi +
        std::sin(phi);
    const double denom = model.p * e * std::abs(slope);
    if (denom == 0.0) {
        return k_infinite_error;
    }
    const double pe_cos = model.p * e * cos_phi;
    return std::sqrt(1.0 - pe_cos * pe_cos) / denom;
}

double phase_error_raw(double phi, const CowSignalModel& model,
                       const CowInterferometer& ifo) {
    model.validate();
    ifo.validate();
    const double e = envelope(phi, model.sigma, ifo.omega0);
    const double cos_phi = std::cos(phi);
    const double slope =
        4.0 * (phi * phi / (ifo.omega0 * ifo.omega0)) * model.sigma *
            model.sigma * cos_phi +
        ifo.omega0 * std::sin(phi);
    const double denom = model.p * e * std::abs(slope);
    if (denom == 0.0) {
        return k_infinite_error;
    }
    const double pe_cos = model.p * e * cos_phi;
    return std::sqrt(1.0 - pe_cos * pe_cos) / denom;
}

OptimalPhase optimal_phase_error(const CowSignalModel& model,
                                 const CowInterferometer& ifo) {
    model.validate();
    ifo.validate();
    const auto result = optimize::minimize_grid_golden(
        [&](double phi) { return phase_error(phi, model, ifo); }, 0.0,
        2.0 * phys::pi);
    return {result.x, result.value};
}

double quality_factor(double noise_rate, double dt_r, double fidelity) {
    if (!(noise_rate >= 0.0) || !(dt_r >= 0.0)) {
        throw std::domain_error("noise rate and window must be non-negative");
    }
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
        throw std::domain_error("fidelity must lie in [0, 1]");
    }
    const double occupancy = noise_rate * dt_r;
    if (occupancy >= 1.0) {
        throw std::domain_error("noise saturates the detection window");
    }
    return (1.0 - occupancy) * fidelity;
}

CowScanResult alpha_error_scan(const std::vector<double>& altitudes,
                               const CowScanScenario& scenario) {
    if (altitudes.empty()) {
        throw std::domain_error("altitude grid must be non-empty");
    }
    scenario.body.validate();
    scenario.model.validate();
    if (!(scenario.refractive_index >= 1.0)) {
        throw std::domain_error("refractive index must be >= 1");
    }

    const double ell_eff = scenario.refractive_index * scenario.ell;
    const double mu = phys::constants.G * scenario.body.mass;

    CowScanResult result;
    result.cells.reserve(altitudes.size());
    result.argmin_altitude = altitudes.front();
    result.min_delta_alpha = k_infinite_error;

    // dphi_opt depends only on the detection model and wavelength, not on
    // the altitude, so it is evaluated once for the whole grid.
    const CowInterferometer ref_ifo = make_interferometer(
        scenario.lambda, 1.0, ell_eff, scenario.g);
    const double dphi_opt =
        optimal_phase_error(scenario.model, ref_ifo).dphi_opt;

    for (double h : altitudes) {
        if (!(h > 0.0)) {
            throw std::domain_error("scan altitudes must be positive");
        }
        const CowInterferometer ifo =
            make_interferometer(scenario.lambda, h, ell_eff, scenario.g);
        const double phi_gr =
            scenario.altitude_dependent_g
                ? gravitational_phase_from_potential(
                      ifo, mu * (1.0 / scenario.body.radius -
                                 1.0 / (scenario.body.radius + h)))
                : gravitational_phase(ifo);

        CowScanCell cell{h, 0.0, phi_gr, dphi_opt, k_infinite_error, false};
        try {
            const double integration = relorbit::integration_time(
                relorbit::PassGeometry{scenario.body.radius + h,
                                       scenario.theta_m, scenario.body});
            const double eta = linkbudget::link_efficiency(
                scenario.tx, scenario.rx, h, scenario.lambda, scenario.losses);
            const double flux =
                linkbudget::single_photon_rate(scenario.source, eta);
            cell.n_photons = flux * integration;
        } catch (const std::domain_error&) {
            cell.n_photons = 0.0;
        }

        if (cell.n_photons > 0.0 && phi_gr > 0.0 &&
            std::isfinite(dphi_opt)) {
            cell.delta_alpha =
                dphi_opt / (phi_gr * std::sqrt(cell.n_photons));
            cell.feasible = true;
            if (cell.delta_alpha < result.min_delta_alpha ||
                (cell.delta_alpha == result.min_delta_alpha &&
                 h < result.argmin_altitude)) {
                result.min_delta_alpha = cell.delta_alpha;
                result.argmin_altitude = h;
            }
        }
        result.cells.push_back(cell);
    }
    return result;
}

} // namespace dsql::cowsim
