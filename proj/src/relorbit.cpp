#include "dsql/relorbit.hpp"

#include <cmath>
#include <stdexcept>

namespace dsql::relorbit {

using phys::constants;
using phys::c_squared;

void Body::validate() const {
    if (!(mass > 0.0) || !(radius > 0.0) || rotation_rate < 0.0)
        throw std::domain_error("Body: mass > 0, radius > 0, rotation_rate >= 0 required");
}

void OrbitSpec::validate(const Body& body) const {
    body.validate();
    if (!(r > body.radius))
        throw std::domain_error("OrbitSpec: r must exceed the body radius");
    if (kind == OrbitKind::elliptic) {
        if (!(eccentricity >= 0.0 && eccentricity < 1.0))
            throw std::domain_error("OrbitSpec: eccentricity must be in [0, 1)");
        const double rp = a * (1.0 - eccentricity);
        const double ra = a * (1.0 + eccentricity);
        // Loose bound tolerance: r is often computed from the conic equation.
        const double tol = 1e-9 * a;
        if (r < rp - tol || r > ra + tol)
            throw std::domain_error("OrbitSpec: r outside [a(1-e), a(1+e)]");
    }
}

void PassGeometry::validate() const {
    body.validate();
    if (!(theta_m >= 0.0 && theta_m < phys::pi / 2.0))
        throw std::domain_error("PassGeometry: theta_m must be in [0, pi/2)");
    if (!(a > body.radius))
        throw std::domain_error("PassGeometry: a must exceed the body radius");
}

void HumanBellTiming::validate() const {
    if (!(t_choice > 0.0) || !(t_question + t_choice <= t_transmit))
        throw std::domain_error(
            "HumanBellTiming: require t_question < t_question + t_choice <= t_transmit");
}

double epsilon_observatory(const Body& body) {
    body.validate();
    const double r_s = phys::schwarzschild_radius(body.mass);
    const double v = body.surface_speed();
    return 0.5 * (r_s / body.radius + v * v / c_squared);
}

double epsilon_satellite_circular(double r, const Body& body) {
    body.validate();
    if (!(r > body.radius))
        throw std::domain_error("epsilon_satellite_circular: r must exceed the body radius");
    return 0.75 * phys::schwarzschild_radius(body.mass) / r;
}

double epsilon_satellite_elliptic(double r, double a, const Body& body) {
    body.validate();
    if (!(r > body.radius) || !(a > 0.0))
        throw std::domain_error("epsilon_satellite_elliptic: invalid r or a");
    return phys::schwarzschild_radius(body.mass) * (1.0 / r - 1.0 / (4.0 * a));
}

double velocity_squared_elliptic(double r, double a, const Body& body) {
    body.validate();
    if (!(r > 0.0) || !(a > 0.0))
        throw std::domain_error("velocity_squared_elliptic: r and a must be > 0");
    const double v_sq = constants.G * body.mass * (2.0 / r - 1.0 / a);
    if (!(v_sq > 0.0))
        throw std::domain_error("velocity_squared_elliptic: degenerate or unbound orbit");
    return v_sq;
}

double clock_rate_ratio(const Body& observatory, const OrbitSpec& sat) {
    sat.validate(observatory);
    return 1.0 + epsilon_observatory(observatory) -
           epsilon_satellite_elliptic(sat.r, sat.a, observatory);
}

double cancellation_radius(const Body& body) {
    const double eps = epsilon_observatory(body);
    return 0.75 * phys::schwarzschild_radius(body.mass) / eps;
}

double doppler_fraction(double v_radial) {
    return std::abs(doppler_fraction_signed(v_radial));
}

double doppler_fraction_signed(double v_radial) {
    if (!(std::abs(v_radial) < constants.c))
        throw std::domain_error("doppler_fraction: |v| must be below c");
    return v_radial / constants.c;
}

std::vector<EpsilonSample> epsilon_profile(const OrbitSpec& orbit, const Body& body,
                                           int samples) {
    orbit.validate(body);
    if (samples < 2)
        throw std::domain_error("epsilon_profile: samples >= 2 required");
    const double eps_obs = epsilon_observatory(body);
    const double e = orbit.kind == OrbitKind::elliptic ? orbit.eccentricity : 0.0;
    const double semilatus = orbit.a * (1.0 - e * e);
    std::vector<EpsilonSample> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double nu = 2.0 * phys::pi * static_cast<double>(i) / samples;
        const double r = semilatus / (1.0 + e * std::cos(nu));
        const double eps_sat = epsilon_satellite_elliptic(r, orbit.a, body);
        out.push_back({nu, eps_sat, eps_obs, eps_obs - eps_sat});
    }
    return out;
}

double integration_time(const PassGeometry& pass) {
    pass.validate();
    const double a = pass.a;
    const double r_e = pass.body.radius;
    const double mu = constants.G * pass.body.mass;
    const double rate = std::sqrt(mu / (a * a * a)) - pass.body.rotation_rate;
    if (!(rate > 0.0))
        throw std::domain_error("integration_time: super-synchronous orbit (rate <= 0)");
    const double s = std::sin(pass.theta_m);
    const double chord = std::sqrt(r_e * r_e + a * a - r_e * a * s);
    return 2.0 * chord / rate * std::cos(pass.theta_m) / a;
}

double integration_time_chord(const PassGeometry& pass) {
    pass.validate();
    const double a = pass.a;
    const double r_e = pass.body.radius;
    const double mu = constants.G * pass.body.mass;
    const double rate = std::sqrt(mu / (a * a * a)) - pass.body.rotation_rate;
    if (!(rate > 0.0))
        throw std::domain_error("integration_time_chord: super-synchronous orbit");
    // Slant range to the satellite when it appears at elevation theta_m.
    const double s = std::sin(pass.theta_m);
    const double d = -r_e * s + std::sqrt(r_e * r_e * s * s + a * a - r_e * r_e);
    // Central angle between station and satellite, law of cosines.
    const double cos_psi = (r_e * r_e + a * a - d * d) / (2.0 * r_e * a);
    const double psi = std::acos(std::min(1.0, std::max(-1.0, cos_psi)));
    return 2.0 * psi / rate;
}

double simultaneity_window(double v_rel, double d_baseline) {
    if (!(v_rel >= 0.0 && v_rel < constants.c))
        throw std::domain_error("simultaneity_window: require 0 <= v < c");
    if (!(d_baseline > 0.0))
        throw std::domain_error("simultaneity_window: baseline must be > 0");
    return v_rel * d_baseline / c_squared;
}

double simultaneity_window_light_distance(double v_rel, double d_baseline) {
    return constants.c * simultaneity_window(v_rel, d_baseline);
}

double polarization_counts_for_angle_error(double delta_theta) {
    if (!(delta_theta > 0.0))
        throw std::domain_error("polarization_counts_for_angle_error: dtheta must be > 0");
    return 1.0 / (4.0 * delta_theta * delta_theta);
}

HumanBellGeometry human_bell_geometry(const HumanBellTiming& timing) {
    timing.validate();
    const double d_min = constants.c * (timing.t_transmit - timing.t_question);
    const double d_em = constants.d_earth_moon;
    const double gain_full = std::pow(d_em / d_min, 4);
    const double gain_midway = std::pow(0.5 * d_em / d_min, 4);
    return {d_min, d_min / d_em, gain_full, gain_midway};
}

DecisionWindows decision_window_midway(double source_distance_to_earth,
                                       double source_distance_to_moon) {
    if (source_distance_to_earth < 0.0 || source_distance_to_moon < 0.0)
        throw std::domain_error("decision_window_midway: distances must be >= 0");
    return {2.0 * source_distance_to_earth / constants.c,
            2.0 * source_distance_to_moon / constants.c};
}

} // namespace dsql::relorbit
