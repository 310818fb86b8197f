#pragma once

namespace dsql::decoherence {

/// Massive test system traversing a propagation path.
struct MassiveSystem {
    double m; ///< Mass [kg]
    double r; ///< Radius [m]
    double v; ///< Velocity [m/s]
    double l; ///< Propagation distance [m]
};

/// Model parameters shared by the rate estimates.
struct ModelParams {
    double tau;         ///< Energy-basis correlation time [s]
    double theta;       ///< Noise temperature [K]
    double ell_cut;     ///< Position-basis cutoff length [m]
    double lambda_diff; ///< Position-diffusion coefficient [kg^2 m^2/s^3]

    void validate() const;
};

/// Energy-basis decoherence rate (delta_e)^2 tau / hbar^2 [1/s].
double gamma_abh(double delta_e, double tau);

/// Energy gap that yields a given energy-basis rate at correlation time tau.
double delta_e_for_gamma_abh(double gamma, double tau);

/// Correlation time from noise temperature: (32 pi / 9) tau_P (theta / T_P).
double abh_tau_from_theta(double theta);

/// Noise temperature producing a given correlation time (inverse of above).
double abh_theta_from_tau(double tau);

/// Position-basis decoherence rate G m^2 / (hbar sqrt(r^2 + ell_cut^2)) [1/s].
double gamma_dp(const MassiveSystem& sys, double ell_cut);

/// Interferometric phase variance m^2 v^3 tau l / hbar^2 (dimensionless).
double abh_dephasing(const MassiveSystem& sys, double tau);

/// Noise temperature at which abh_dephasing reaches a target variance.
double abh_theta_for_dephasing(const MassiveSystem& sys, double target);

/// Position-basis phase variance G m^2 l / (hbar r v) (dimensionless).
double dp_dephasing(const MassiveSystem& sys);

/// Mass at which dp_dephasing reaches a target variance [kg].
double dp_mass_for_dephasing(double target, double r, double v, double l);

/// Wave-packet variance (dx)^2 = sigma_s_sq + lambda_diff t^3 / (2 m^2) [m^2].
double wavepacket_spread(double sigma_s_sq, double lambda_diff, double m,
                         double t);

/// Time at which the diffusion term equals the free-spreading variance [s].
double wavepacket_crossover(double sigma_s_sq, double lambda_diff, double m);

/// Photon phase variance 8 G (k_B theta) E^2 l / (hbar^2 c^6) (dimensionless).
double photon_visibility_loss(double theta, double energy, double l);

/// Mean photon number needed to resolve a phase spread: 1 / delta_phi^2.
double photons_for_visibility(double delta_phi);

} // namespace dsql::decoherence
