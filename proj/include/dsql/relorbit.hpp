#pragma once

#include <vector>

#include "dsql/physcore.hpp"

namespace dsql::relorbit {

/// A gravitating body hosting a ground observatory.
struct Body {
    double mass;          ///< [kg]
    double radius;        ///< [m]
    double rotation_rate; ///< Sidereal rotation rate [rad/s]

    /// Equatorial surface rotation speed [m/s].
    double surface_speed() const { return rotation_rate * radius; }

    /// Earth with mean radius and sidereal rate.
    static Body earth() {
        return {phys::constants.M_earth, phys::constants.R_earth,
                phys::constants.Omega_earth};
    }

    /// Moon (sidereal period 27.321661 d).
    static Body moon() {
        return {phys::constants.M_moon, 1.7374e6, 2.6616995e-6};
    }

    void validate() const;
};

enum class OrbitKind { circular, elliptic };

/// Satellite orbit around a Body; r is the instantaneous radial distance.
struct OrbitSpec {
    OrbitKind kind;
    double r;            ///< Instantaneous radial distance from body center [m]
    double a;            ///< Semi-major axis [m]; = r for circular
    double eccentricity; ///< Elliptic only; 0 <= e < 1

    static OrbitSpec circular(double radius) {
        return {OrbitKind::circular, radius, radius, 0.0};
    }
    static OrbitSpec elliptic(double r, double a, double e) {
        return {OrbitKind::elliptic, r, a, e};
    }

    void validate(const Body& body) const;
};

/// Ground-pass geometry for integration-time estimates.
struct PassGeometry {
    double a;       ///< Orbit semi-major axis [m]
    double theta_m; ///< Minimum elevation above horizon [rad], in [0, pi/2)
    Body body;

    void validate() const;
};

/// Timing geometry for Bell tests with human-chosen settings.
struct HumanBellTiming {
    double t_question;     ///< Question display time [s]
    double t_choice;       ///< Human reaction interval [s]
    double t_transmit;     ///< Cache/transmit deadline [s]
    double source_distance; ///< Source-to-nearer-analyzer distance [m]

    void validate() const; // requires t_question < t_question + t_choice <= t_transmit
};

/// Fractional clock-rate correction of a ground observatory:
/// (1/2)(r_s/R + v^2/c^2) with v the equatorial rotation speed.
double epsilon_observatory(const Body& body);

/// Fractional correction for a circular orbit at radius r: (3/4) r_s / r.
double epsilon_satellite_circular(double r, const Body& body);

/// Fractional correction for an elliptic orbit: r_s (1/r - 1/(4a)).
/// Reduces to the circular form at a = r.
double epsilon_satellite_elliptic(double r, double a, const Body& body);

/// Vis-viva speed squared GM(2/r - 1/a); rejects unbound/degenerate orbits.
double velocity_squared_elliptic(double r, double a, const Body& body);

/// Satellite/observatory clock-tick ratio 1 + eps_obs - eps_sat.
double clock_rate_ratio(const Body& observatory, const OrbitSpec& sat);

/// Circular-orbit radius where satellite and observatory corrections cancel:
/// r = (3/4) r_s / eps_obs. The clock-rate ratio is exactly 1 there.
double cancellation_radius(const Body& body);

/// Magnitude of the first-order Doppler fraction |v|/c.
double doppler_fraction(double v_radial);

/// Signed first-order Doppler fraction v/c (positive = receding).
double doppler_fraction_signed(double v_radial);

/// One sample of an elliptic-orbit clock-correction profile.
struct EpsilonSample {
    double true_anomaly; ///< [rad]
    double eps_satellite;
    double eps_observatory;
    double net_rate;     ///< eps_observatory - eps_satellite
};

/// Samples an elliptic orbit uniformly in true anomaly (nu_i = 2*pi*i/samples,
/// starting at perigee); r follows the conic equation a(1-e^2)/(1+e cos nu).
std::vector<EpsilonSample> epsilon_profile(const OrbitSpec& orbit, const Body& body,
                                           int samples);

/// Single-pass integration time:
///   T = 2 sqrt(R_e^2 + a^2 - R_e a sin(theta_m)) / (sqrt(GM/a^3) - Omega)
///       * cos(theta_m) / a.
/// Throws when the orbit is at or above the synchronous rate
/// (denominator <= 0).
double integration_time(const PassGeometry& pass);

/// Chord-geometry alternative for comparison: central angle of the visible
/// arc above theta_m divided by the relative angular rate. Not used by any
/// mission scan; kept as a cross-check of the simplified formula above.
double integration_time_chord(const PassGeometry& pass);

/// Time window within which spacelike-separated detections stay conclusive
/// for frames moving at v_rel with baseline D: dt = v D / c^2.
double simultaneity_window(double v_rel, double d_baseline);

/// Light-travel distance c * dt of a simultaneity window.
double simultaneity_window_light_distance(double v_rel, double d_baseline);

/// Counts needed to bound a polarization-rotation angle error:
/// N = 1/(4 dtheta^2), inverting dtheta = 1/(2 sqrt(N)).
double polarization_counts_for_angle_error(double delta_theta);

/// Geometry implied by human-in-the-loop Bell timing.
struct HumanBellGeometry {
    double min_source_distance;     ///< c (t_transmit - t_question) [m]
    double fraction_of_earth_moon;  ///< min distance / d_earth_moon
    double rate_gain_vs_full;       ///< (d_EM / d_source)^4 pair-rate gain
    double rate_gain_vs_midway;     ///< ((d_EM/2) / d_source)^4
};

/// Minimum source distance for light-cone-enforced free choice, and the
/// 1/R^4 pair-rate gains relative to sources at the full and half
/// Earth-Moon distance.
HumanBellGeometry human_bell_geometry(const HumanBellTiming& timing);

/// Decision windows for participants when the source sits between them:
/// each window equals twice the light travel time to the source.
struct DecisionWindows {
    double t_E; ///< [s]
    double t_M; ///< [s]
};
DecisionWindows decision_window_midway(double source_distance_to_earth,
                                       double source_distance_to_moon);

} // namespace dsql::relorbit
