#pragma once

#include <vector>

#include "dsql/linkbudget.hpp"
#include "dsql/relorbit.hpp"

namespace dsql::cowsim {

/// Unbalanced interferometer spanning a gravitational potential difference.
struct CowInterferometer {
    double lambda; ///< Vacuum wavelength [m]
    double omega0; ///< Central angular frequency, 2 pi c / lambda [rad/s]
    double h;      ///< Source-receiver altitude difference [m]
    double ell;    ///< Delay-line length [m]
    double g;      ///< Gravitational acceleration [m/s^2]
    double theta;  ///< Controllable bias phase [rad]
    double alpha;  ///< Redshift-deviation parameter (0 in general relativity)

    void validate() const;
};

/// Builds an interferometer with omega0 derived from the wavelength.
CowInterferometer make_interferometer(double lambda, double h, double ell,
                                      double g, double theta = 0.0,
                                      double alpha = 0.0);

/// Detection-statistics model for one arm's counting experiment.
struct CowSignalModel {
    double sigma;    ///< Photon half-bandwidth [rad/s]
    double p;        ///< Quality factor in [0, 1]
    double fidelity; ///< Source fidelity F
    double dt_r;     ///< Detection timing window [s]

    void validate() const;
};

/// Gravitational phase (1 + alpha) * (2 pi / lambda) * g * h * ell / c^2.
double gravitational_phase(const CowInterferometer& ifo);

/// Same phase with an explicit potential difference replacing g*h; used
/// when the field is not modeled as uniform over the altitude span.
double gravitational_phase_from_potential(const CowInterferometer& ifo,
                                          double delta_u);

/// Line-of-sight Doppler phase (2 pi / lambda) * ell * v / c (signed).
double doppler_phase(double lambda, double ell, double v);

/// Single-detector click probability
/// P_A = (p/2)(1 - e^{-2 sigma^2 tau^2} cos phi) + (1 - p)/2, tau = phi/omega0.
double detection_probability(double phi, const CowSignalModel& model,
                             const CowInterferometer& ifo);

/// Per-event phase error in radians: the binomial error of the click
/// probability propagated through its phi derivative,
/// sqrt(1 - p^2 E^2 cos^2 phi) / (p E |4 sigma^2 (phi/omega0^2) cos phi + sin phi|)
/// with E = e^{-2 sigma^2 phi^2 / omega0^2}. Divide by sqrt(N) for N events.
/// Returns the infinite-error sentinel at stationary points.
double phase_error(double phi, const CowSignalModel& model,
                   const CowInterferometer& ifo);

/// Frequency-scaled variant of the estimator with denominator
/// p E |4 (phi^2/omega0^2) sigma^2 cos phi + omega0 sin phi|; carries an
/// extra 1/omega0 scale relative to phase_error and is kept for
/// cross-checks only.
double phase_error_raw(double phi, const CowSignalModel& model,
                       const CowInterferometer& ifo);

struct OptimalPhase {
    double phi_opt;  ///< [rad]
    double dphi_opt; ///< Per-event error at the optimum [rad]
};

/// Minimizes phase_error over phi in (0, 2 pi): deterministic 1024-point
/// coarse grid followed by golden-section refinement.
OptimalPhase optimal_phase_error(const CowSignalModel& model,
                                 const CowInterferometer& ifo);

/// Quality factor p = (1 - noise_rate * dt_r) * F (single-power form).
double quality_factor(double noise_rate, double dt_r, double fidelity);

/// Link, pass, and detection configuration for an altitude scan.
struct CowScanScenario {
    linkbudget::OpticalTerminal tx;
    linkbudget::OpticalTerminal rx;
    double lambda;                  ///< [m]
    linkbudget::LossFactors losses; ///< Includes any fiber Beer's-law factor
    linkbudget::SourceSpec source;
    relorbit::Body body;
    double theta_m;            ///< Pass minimum elevation [rad]
    CowSignalModel model;
    double ell;                ///< Delay-line length [m]
    double refractive_index;   ///< Multiplier on ell for non-vacuum delay
    bool altitude_dependent_g; ///< Use Delta-U(h) instead of uniform g*h
    double g;                  ///< Uniform-field acceleration [m/s^2]
};

struct CowScanCell {
    double altitude;    ///< [m]
    double n_photons;   ///< Collected events over one pass
    double phi_gr;      ///< [rad]
    double dphi_opt;    ///< [rad]
    double delta_alpha; ///< Redshift-parameter error
    bool feasible;      ///< False when the pass yields no events
};

struct CowScanResult {
    std::vector<CowScanCell> cells;
    double argmin_altitude;  ///< [m]
    double min_delta_alpha;
};

/// Scans delta_alpha = dphi_opt / (phi_gr * sqrt(N)) over altitudes, with
/// N = single-photon rate x pass integration time. Infeasible cells carry
/// the infinite-error sentinel and are excluded from the arg-min.
CowScanResult alpha_error_scan(const std::vector<double>& altitudes,
                               const CowScanScenario& scenario);

} // namespace dsql::cowsim
