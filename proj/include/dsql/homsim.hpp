#pragma once

#include <vector>

#include "dsql/linkbudget.hpp"
#include "dsql/relorbit.hpp"

namespace dsql::homsim {

/// Photon-pair source for two-photon interference.
struct HomSource {
    double omega1;   ///< First photon angular frequency [rad/s]
    double omega2;   ///< Second photon angular frequency [rad/s]
    double sigma;    ///< Half-bandwidth, identical for both photons [rad/s]
    bool degenerate; ///< True iff omega1 == omega2

    void validate() const;
};

/// Two-station geometry and kinematics for the timing link.
struct HomGeometry {
    double ell;       ///< Delay length [m]
    double delta_ell; ///< Proper-length mismatch [m]
    double v_g_los;   ///< Ground line-of-sight velocity [m/s]
    double v_s_los;   ///< Spacecraft line-of-sight velocity [m/s]
    double v_g_sq;    ///< Ground squared speed [m^2/s^2]
    double v_s_sq;    ///< Spacecraft squared speed [m^2/s^2]
    double u_g;       ///< Ground potential, negative convention -GM/r [m^2/s^2]
    double u_s;       ///< Spacecraft potential, same convention [m^2/s^2]
    double tau_c;     ///< Applied control delay [s]

    void validate() const;
};

/// Coincidence probability for identical photons: (1 - e^{-2 sigma^2 tau^2})/2.
double hom_dip_degenerate(double tau, double sigma);

/// Coincidence probability with a frequency-offset pair:
/// (1 - cos(domega tau) e^{-2 sigma^2 tau^2})/2.
double hom_entangled(double tau, double sigma, double domega);

/// Same with a quality factor p mixing in flat noise:
/// (p/2)(1 - cos(domega tau) e^{-2 sigma^2 tau^2}) + (1 - p)/2.
double noisy_coincidence(double tau, double sigma, double domega, double p);

/// Quality factor p = (1 - noise_rate * dt_r)^2 * F (two detection windows).
double quality_factor_hom(double noise_rate, double dt_r, double fidelity);

/// Arrival-time shift between the two paths from the first-order Doppler
/// ratio, time dilation, and gravitational redshift:
/// tau = (ell/c) [ (1 + v_s_los/c)/(1 + v_g_los/c) *
///                 (1 + (u_s - u_g)/c^2 - (v_s_sq - v_g_sq)/(2 c^2)) - 1 ].
double relativistic_time_shift(const HomGeometry& geo);

/// Net delay tau_gr + delta_ell/c + tau_c + (ell/c)(v_s_los - v_g_los)/c,
/// with tau_gr = (ell/c)((u_s - u_g)/c^2 - (v_s_sq - v_g_sq)/(2 c^2)).
double total_time_shift(const HomGeometry& geo);

/// Interferometer phase shift delta-phi = domega * tau_rel.
double hom_phase_shift(double domega, double tau_rel);

/// Per-coincidence timing error
/// sqrt(1 - p^2 e^{-4 s^2 t^2} cos^2(w t)) /
///   (p e^{-2 s^2 t^2} |4 t s^2 cos(w t) + w sin(w t)|)  [s].
/// Divide by sqrt(N_c) for N_c coincidences. Infinite-error sentinel at
/// stationary points.
double timing_error(double tau, double sigma, double domega, double p);

struct OptimalTiming {
    double tau_opt;  ///< [s]
    double dtau_opt; ///< Per-coincidence error at the optimum [s]
};

/// Minimizes timing_error over tau in (0, max(6/sigma, 4 pi/domega)]:
/// deterministic coarse grid plus golden-section refinement.
OptimalTiming optimal_timing_error(double sigma, double domega, double p);

/// Redshift-parameter error Delta-alpha = dtau / ((ell/c)(delta_u/c^2) sqrt(N_c)).
double alpha_error_hom(double dtau, double ell, double delta_u, double n_c);

enum class HomScanMode { degenerate, nondegenerate };

/// Link, pass, and detection configuration for the contour scans.
struct HomScanScenario {
    linkbudget::OpticalTerminal tx;
    linkbudget::OpticalTerminal rx;
    double lambda1;                 ///< First-channel wavelength [m]
    double lambda2;                 ///< Second-channel wavelength [m]
    linkbudget::LossFactors losses; ///< Shared per channel
    linkbudget::SourceSpec source;
    relorbit::Body body;
    double theta_m;   ///< Pass minimum elevation [rad]
    double p_quality; ///< Coincidence quality factor
    double ell;       ///< Delay length [m]
};

struct HomScanCell {
    double sigma;       ///< [rad/s]
    double altitude;    ///< [m]
    double n_pairs;     ///< Coincidences over one pass
    double dtau_opt;    ///< [s]
    double delta_alpha;
    bool feasible;
};

struct HomScanResult {
    std::vector<HomScanCell> cells;
    double argmin_sigma;    ///< [rad/s]
    double argmin_altitude; ///< [m]
    double min_delta_alpha;
};

/// Scans Delta-alpha over (sigma grid) x (altitude grid). Pair flux uses
/// per-wavelength diffraction (one photon per channel in non-degenerate
/// mode, both photons on channel 1 in degenerate mode); the redshift
/// signal is Delta-U(h) = GM (1/R - 1/(R+h)). Bandwidths above the
/// 4.7e13 rad/s hardware cap are rejected.
HomScanResult hom_alpha_scan(const std::vector<double>& sigma_grid,
                             const std::vector<double>& altitude_grid,
                             HomScanMode mode,
                             const HomScanScenario& scenario);

} // namespace dsql::homsim
