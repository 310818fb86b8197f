#pragma once

namespace dsql::linkbudget {

/// Transmit or receive telescope.
struct OpticalTerminal {
    double aperture;  ///< Diameter [m]
    double m_squared; ///< Beam-quality factor, >= 1

    void validate() const;
};

/// Multiplicative throughput factors beyond diffraction.
struct LossFactors {
    double eta_rx;     ///< Receiver optics efficiency
    double eta_d;      ///< Detector efficiency
    double eta_tx;     ///< Transmitter/clipping/pointing efficiency
    double eta_atm;    ///< Atmospheric transmission
    double eta_margin; ///< Design margin

    void validate() const; // each factor in [0, 1]
};

/// Pulsed photon-pair source.
struct SourceSpec {
    double f_clock;  ///< Pulse rate [Hz]
    double p1;       ///< Pair-production probability per pulse
    double fidelity; ///< Intrinsic state fidelity F

    void validate() const;
};

/// Background/noise description per the receiver.
struct NoiseEnvironment {
    double radiance_w;      ///< Background radiance W [photons s^-1 m^-2 sr^-1 Hz^-1]
    double fov;             ///< Full linear field of view [rad]
    double collection_area; ///< A [m^2]
    double bandwidth;       ///< Optical filter bandwidth [Hz]
    double source_excess;   ///< S_n, extra photons from the source [counts/s]
    double dark_rate;       ///< D_r [counts/s]
    double eta_rx;          ///< Receiver efficiency applied to optical noise terms

    void validate() const;
};

/// Product of the five loss factors.
double aggregate_losses(const LossFactors& f);

/// One-way link efficiency including near-field saturation:
///   eta = eta_x * (1 - exp(-2 D_Tx^2 D_Rx^2 / (D_Tx^4 + 2 (M^2)^2 R^2 lambda^2))).
/// Limits: range -> 0 gives eta_x (1 - exp(-2 D_Rx^2 / D_Tx^2)); large range
/// converges exactly to link_efficiency_far_field.
double link_efficiency(const OpticalTerminal& tx, const OpticalTerminal& rx,
                       double range, double lambda, const LossFactors& losses);

/// Far-field (diffraction-limited) link efficiency result.
struct FarFieldResult {
    double eta;            ///< eta_x * D_Rx^2 / (M^2 (lambda/D_Tx) R)^2
    bool far_field_valid;  ///< False = outside validity, value is a warning-level estimate
};

/// Far-field link efficiency eta_x * D_Rx^2 / (M^2 (lambda/D_Tx) R)^2.
/// When the far-field condition fails the value is still returned with the
/// warning flag cleared to false.
FarFieldResult link_efficiency_far_field(const OpticalTerminal& tx,
                                         const OpticalTerminal& rx, double range,
                                         double lambda, const LossFactors& losses);

/// Far-field validity: R >= 10 * pi * D_Tx^2 / lambda.
bool far_field_valid(double range, double d_tx, double lambda);

/// Received photon flux for a clocked single-photon stream: F_clock * eta.
double single_photon_rate(const SourceSpec& src, double eta);

/// Singles rate when only one photon of each pair is transmitted:
/// F_clock * p1 * eta.
double entangled_one_channel_rate(const SourceSpec& src, double eta);

/// Simultaneous two-channel pair rate: F_clock * p1 * eta1 * eta2.
double entangled_pair_rate(const SourceSpec& src, double eta1, double eta2);

/// Total noise count rate:
///   eta_rx * (W * A * FOV^2/4 * BW + S_n) + D_r.
double noise_rate(const NoiseEnvironment& env);

/// Largest noise rate compatible with an effective purity target:
/// inverts p = (1 - N dt_r)^k F for k = 1 (single channel) or k = 2
/// (two-channel coincidence), N = (1 - (p/F)^(1/k)) / dt_r.
double max_noise_for_purity(double fidelity, double p_target, double dt_r,
                            bool squared);

} // namespace dsql::linkbudget
