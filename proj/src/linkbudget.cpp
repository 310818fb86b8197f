#include "dsql/linkbudget.hpp"

#include <cmath>
#include <stdexcept>

#include "dsql/physcore.hpp"

namespace dsql::linkbudget {

void OpticalTerminal::validate() const {
    if (!(aperture > 0.0))
        throw std::domain_error("OpticalTerminal: aperture must be > 0");
    if (!(m_squared >= 1.0))
        throw std::domain_error("OpticalTerminal: m_squared must be >= 1");
}

void LossFactors::validate() const {
    for (double f : {eta_rx, eta_d, eta_tx, eta_atm, eta_margin})
        if (!(f >= 0.0 && f <= 1.0))
            throw std::domain_error("LossFactors: every factor must be in [0, 1]");
}

void SourceSpec::validate() const {
    if (!(f_clock > 0.0))
        throw std::domain_error("SourceSpec: f_clock must be > 0");
    if (!(p1 >= 0.0 && p1 <= 1.0))
        throw std::domain_error("SourceSpec: p1 must be in [0, 1]");
    if (!(fidelity >= 0.0 && fidelity <= 1.0))
        throw std::domain_error("SourceSpec: fidelity must be in [0, 1]");
}

void NoiseEnvironment::validate() const {
    for (double f : {radiance_w, fov, collection_area, bandwidth, source_excess,
                     dark_rate, eta_rx})
        if (f < 0.0)
            throw std::domain_error("NoiseEnvironment: all fields must be >= 0");
}

double aggregate_losses(const LossFactors& f) {
    f.validate();
    return f.eta_rx * f.eta_d * f.eta_tx * f.eta_atm * f.eta_margin;
}

double link_efficiency(const OpticalTerminal& tx, const OpticalTerminal& rx,
                       double range, double lambda, const LossFactors& losses) {
    tx.validate();
    rx.validate();
    if (!(range >= 0.0) || !(lambda > 0.0))
        throw std::domain_error("link_efficiency: range >= 0 and lambda > 0 required");
    const double eta_x = aggregate_losses(losses);
    const double dt2 = tx.aperture * tx.aperture;
    const double dr2 = rx.aperture * rx.aperture;
    const double m2 = tx.m_squared;
    const double rl = m2 * range * lambda;
    const double arg = 2.0 * dt2 * dr2 / (dt2 * dt2 + 2.0 * rl * rl);
    return eta_x * (1.0 - std::exp(-arg));
}

FarFieldResult link_efficiency_far_field(const OpticalTerminal& tx,
                                         const OpticalTerminal& rx, double range,
                                         double lambda, const LossFactors& losses) {
    tx.validate();
    rx.validate();
    if (!(range > 0.0) || !(lambda > 0.0))
        throw std::domain_error(
            "link_efficiency_far_field: range and lambda must be > 0");
    const double eta_x = aggregate_losses(losses);
    const double spot = tx.m_squared * (lambda / tx.aperture) * range;
    const double eta = eta_x * (rx.aperture * rx.aperture) / (spot * spot);
    return {eta, far_field_valid(range, tx.aperture, lambda)};
}

bool far_field_valid(double range, double d_tx, double lambda) {
    if (!(range > 0.0) || !(d_tx >= 0.0) || !(lambda > 0.0))
        throw std::domain_error("far_field_valid: positive range and lambda required");
    return range >= 10.0 * phys::pi * d_tx * d_tx / lambda;
}

double single_photon_rate(const SourceSpec& src, double eta) {
    src.validate();
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("single_photon_rate: eta must be in [0, 1]");
    return src.f_clock * eta;
}

double entangled_one_channel_rate(const SourceSpec& src, double eta) {
    src.validate();
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("entangled_one_channel_rate: eta must be in [0, 1]");
    return src.f_clock * src.p1 * eta;
}

double entangled_pair_rate(const SourceSpec& src, double eta1, double eta2) {
    src.validate();
    if (!(eta1 >= 0.0 && eta1 <= 1.0) || !(eta2 >= 0.0 && eta2 <= 1.0))
        throw std::domain_error("entangled_pair_rate: efficiencies must be in [0, 1]");
    return src.f_clock * src.p1 * eta1 * eta2;
}

double noise_rate(const NoiseEnvironment& env) {
    env.validate();
    const double sky = env.radiance_w * env.collection_area * env.fov * env.fov / 4.0 *
                       env.bandwidth;
    return env.eta_rx * (sky + env.source_excess) + env.dark_rate;
}

double max_noise_for_purity(double fidelity, double p_target, double dt_r,
                            bool squared) {
    if (!(dt_r > 0.0))
        throw std::domain_error("max_noise_for_purity: dt_r must be > 0");
    if (!(p_target > 0.0 && fidelity <= 1.0 && p_target <= fidelity))
        throw std::domain_error(
            "max_noise_for_purity: require 0 < p_target <= fidelity <= 1");
    const double k = squared ? 2.0 : 1.0;
    return (1.0 - std::pow(p_target / fidelity, 1.0 / k)) / dt_r;
}

} // namespace dsql::linkbudget
