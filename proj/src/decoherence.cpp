#include "dsql/decoherence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dsql/physcore.hpp"

namespace dsql::decoherence {

namespace {

constexpr double k_ell_cut_floor = 0.5e-10; ///< Experimental bound [m]

void require_positive(double value, const char* what) {
    if (!(value > 0.0)) {
        throw std::domain_error(std::string(what) + " must be positive");
    }
}

/// tau = (32 pi / 9) tau_P at theta = T_P; linear in theta.
double tau_theta_slope() {
    return 32.0 * phys::pi / 9.0 * phys::constants.tau_P /
           phys::constants.T_P;
}

} // namespace

void ModelParams::validate() const {
    if (!(tau >= 0.0) || !(theta >= 0.0) || !(lambda_diff >= 0.0)) {
        throw std::domain_error("model parameters must be non-negative");
    }
    if (!(ell_cut >= k_ell_cut_floor)) {
        throw std::domain_error(
            "cutoff length below the experimentally excluded floor");
    }
}

double gamma_abh(double delta_e, double tau) {
    if (!(delta_e >= 0.0) || !(tau >= 0.0)) {
        throw std::domain_error("energy gap and time must be non-negative");
    }
    const double hbar = phys::constants.hbar;
    return delta_e * delta_e * tau / (hbar * hbar);
}

double delta_e_for_gamma_abh(double gamma, double tau) {
    require_positive(gamma, "rate");
    require_positive(tau, "correlation time");
    return phys::constants.hbar * std::sqrt(gamma / tau);
}

double abh_tau_from_theta(double theta) {
    if (!(theta >= 0.0)) {
        throw std::domain_error("temperature must be non-negative");
    }
    return tau_theta_slope() * theta;
}

double abh_theta_from_tau(double tau) {
    if (!(tau >= 0.0)) {
        throw std::domain_error("correlation time must be non-negative");
    }
    return tau / tau_theta_slope();
}

double gamma_dp(const MassiveSystem& sys, double ell_cut) {
    if (!(sys.m >= 0.0)) {
        throw std::domain_error("mass must be non-negative");
    }
    require_positive(sys.r, "radius");
    if (!(ell_cut >= 0.0)) {
        throw std::domain_error("cutoff length must be non-negative");
    }
    return phys::constants.G * sys.m * sys.m /
           (phys::constants.hbar *
            std::sqrt(sys.r * sys.r + ell_cut * ell_cut));
}

double abh_dephasing(const MassiveSystem& sys, double tau) {
    if (!(sys.m >= 0.0) || !(tau >= 0.0)) {
        throw std::domain_error("mass and time must be non-negative");
    }
    require_positive(sys.v, "velocity");
    require_positive(sys.l, "distance");
    const double hbar = phys::constants.hbar;
    return sys.m * sys.m * sys.v * sys.v * sys.v * tau * sys.l /
           (hbar * hbar);
}

double abh_theta_for_dephasing(const MassiveSystem& sys, double target) {
    require_positive(target, "target variance");
    require_positive(sys.m, "mass");
    require_positive(sys.v, "velocity");
    require_positive(sys.l, "distance");
    const double hbar = phys::constants.hbar;
    const double tau = target * hbar * hbar /
                       (sys.m * sys.m * sys.v * sys.v * sys.v * sys.l);
    return abh_theta_from_tau(tau);
}

double dp_dephasing(const MassiveSystem& sys) {
    if (!(sys.m >= 0.0)) {
        throw std::domain_error("mass must be non-negative");
    }
    require_positive(sys.r, "radius");
    require_positive(sys.v, "velocity");
    require_positive(sys.l, "distance");
    return phys::constants.G * sys.m * sys.m * sys.l /
           (phys::constants.hbar * sys.r * sys.v);
}

double dp_mass_for_dephasing(double target, double r, double v, double l) {
    require_positive(target, "target variance");
    require_positive(r, "radius");
    require_positive(v, "velocity");
    require_positive(l, "distance");
    return std::sqrt(target * phys::constants.hbar * r * v /
                     (phys::constants.G * l));
}

double wavepacket_spread(double sigma_s_sq, double lambda_diff, double m,
                         double t) {
    if (!(sigma_s_sq >= 0.0) || !(lambda_diff >= 0.0)) {
        throw std::domain_error("variance and diffusion must be non-negative");
    }
    require_positive(m, "mass");
    if (!(t >= 0.0)) {
        throw std::domain_error("time must be non-negative");
    }
    return sigma_s_sq + lambda_diff * t * t * t / (2.0 * m * m);
}

double wavepacket_crossover(double sigma_s_sq, double lambda_diff, double m) {
    require_positive(sigma_s_sq, "variance");
    require_positive(lambda_diff, "diffusion");
    require_positive(m, "mass");
    return std::cbrt(2.0 * m * m * sigma_s_sq / lambda_diff);
}

double photon_visibility_loss(double theta, double energy, double l) {
    if (!(theta >= 0.0)) {
        throw std::domain_error("temperature must be non-negative");
    }
    require_positive(energy, "photon energy");
    require_positive(l, "distance");
    const double hbar = phys::constants.hbar;
    const double c6 = phys::c_squared * phys::c_squared * phys::c_squared;
    return 8.0 * phys::constants.G * phys::constants.k_B * theta * energy *
           energy * l / (hbar * hbar * c6);
}

double photons_for_visibility(double delta_phi) {
    require_positive(delta_phi, "phase spread");
    return 1.0 / (delta_phi * delta_phi);
}

} // namespace dsql::decoherence
