#include "dsql/bellstats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dsql/physcore.hpp"
#include "dsql/rng.hpp"

namespace dsql::bellstats {

namespace {

constexpr double k_inv_sqrt2 = 0.7071067811865476;

/// Analyzer settings of the four CHSH blocks, in block order.
constexpr std::array<double, 4> k_alice_angle = {0.0, 0.0, phys::pi / 4.0,
                                                 phys::pi / 4.0};
constexpr std::array<double, 4> k_bob_angle = {phys::pi / 8.0, -phys::pi / 8.0,
                                               phys::pi / 8.0, -phys::pi / 8.0};

double block_correlation(double p, int block) {
    return p * std::cos(2.0 * (k_alice_angle[block] - k_bob_angle[block]));
}

} // namespace

void MixedBellState::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("bell-state fraction must lie in [0, 1]");
    }
}

void RatesModel::validate() const {
    if (!(r_e >= 0.0) || !(r_i >= 0.0) || !(n_a >= 0.0) || !(n_b >= 0.0)) {
        throw std::domain_error("rates must be non-negative");
    }
    if (!(eta_a >= 0.0 && eta_a <= 1.0) || !(eta_b >= 0.0 && eta_b <= 1.0)) {
        throw std::domain_error("channel efficiencies must lie in [0, 1]");
    }
    if (!(t_window > 0.0)) {
        throw std::domain_error("coincidence window must be positive");
    }
}

double correlation_coefficient(const CorrelationBlock& block) {
    const double total = block.total();
    if (!(total > 0.0)) {
        throw std::domain_error("correlation block has no counts");
    }
    return (block.n_pp + block.n_mm - block.n_pm - block.n_mp) / total;
}

double chsh_s(const BellCounts& counts) {
    return correlation_coefficient(counts.blocks[0]) +
           correlation_coefficient(counts.blocks[1]) +
           correlation_coefficient(counts.blocks[2]) -
           correlation_coefficient(counts.blocks[3]);
}

double expected_s(double p) {
    MixedBellState{p}.validate();
    return 2.0 * std::numbers::sqrt2 * p;
}

double sigma_s(double n_counts, double p) {
    MixedBellState{p}.validate();
    if (!(n_counts > 0.0)) {
        throw std::domain_error("count total must be positive");
    }
    return std::sqrt(8.0 * (2.0 - p * p) / n_counts);
}

double n_sigma(double n_counts, double p) {
    MixedBellState{p}.validate();
    if (!(n_counts > 0.0)) {
        throw std::domain_error("count total must be positive");
    }
    return std::sqrt(n_counts) * (p - k_inv_sqrt2) / std::sqrt(2.0 - p * p);
}

std::int64_t required_counts(double p, double n_target) {
    MixedBellState{p}.validate();
    if (!(n_target > 0.0)) {
        throw std::domain_error("significance target must be positive");
    }
    if (p <= k_inv_sqrt2) {
        throw std::domain_error(
            "no violation at any count total for this state fraction");
    }
    const double excess = p - k_inv_sqrt2;
    const double exact = n_target * n_target * (2.0 - p * p) / (excess * excess);
    auto n = static_cast<std::int64_t>(std::ceil(exact));
    n = std::max<std::int64_t>(n, 1);
    while (n > 1 && n_sigma(static_cast<double>(n - 1), p) >= n_target) {
        --n;
    }
    while (n_sigma(static_cast<double>(n), p) < n_target) {
        ++n;
    }
    return n;
}

AccidentalRate accidental_rate(const RatesModel& m) {
    m.validate();
    const double singles_a = (m.r_e + m.r_i) * m.eta_a + m.n_a;
    const double singles_b = (m.r_e + m.r_i) * m.eta_b + m.n_b;
    const bool warn = singles_a * m.t_window >= 0.1 ||
                      singles_b * m.t_window >= 0.1;
    return {singles_a * singles_b * m.t_window, warn};
}

double entangled_coincidence_rate(const RatesModel& m) {
    m.validate();
    return m.r_e * m.eta_a * m.eta_b;
}

double purity_from_rates(const RatesModel& m) {
    const double entangled = entangled_coincidence_rate(m);
    if (!(entangled > 0.0)) {
        throw std::domain_error("entangled coincidence rate must be positive");
    }
    return 1.0 / (1.0 + accidental_rate(m).rate / entangled);
}

double effective_purity(double fidelity, double noise_rate, double dt_r) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
        throw std::domain_error("fidelity must lie in [0, 1]");
    }
    if (!(noise_rate >= 0.0) || !(dt_r >= 0.0)) {
        throw std::domain_error("noise rate and window must be non-negative");
    }
    const double occupancy = noise_rate * dt_r;
    if (occupancy >= 1.0) {
        throw std::domain_error("noise saturates the detection window");
    }
    return (1.0 - occupancy) * fidelity;
}

double poisson_window(double rate, double t, int k) {
    if (!(rate >= 0.0) || !(t >= 0.0)) {
        throw std::domain_error("rate and window must be non-negative");
    }
    if (k < 0) {
        throw std::domain_error("event count must be non-negative");
    }
    const double mu = rate * t;
    if (mu == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    return std::exp(k * std::log(mu) - mu - std::lgamma(k + 1.0));
}

double poisson_at_least_one(double rate, double t) {
    if (!(rate >= 0.0) || !(t >= 0.0)) {
        throw std::domain_error("rate and window must be non-negative");
    }
    return -std::expm1(-rate * t);
}

BellCounts simulate_bell_counts(double p, std::int64_t n_trials,
                                std::uint64_t seed) {
    MixedBellState{p}.validate();
    if (n_trials <= 0) {
        throw std::domain_error("trial count must be positive");
    }

    // Joint category probabilities: uniform setting choice (1/4 per block)
    // times the in-block outcome law P(++) = P(--) = (1+E)/4,
    // P(+-) = P(-+) = (1-E)/4 with E = p cos(2(a-b)).
    std::array<double, 16> probs{};
    for (int block = 0; block < 4; ++block) {
        const double e = block_correlation(p, block);
        probs[4 * block + 0] = 0.25 * (1.0 + e) / 4.0;
        probs[4 * block + 1] = 0.25 * (1.0 - e) / 4.0;
        probs[4 * block + 2] = 0.25 * (1.0 - e) / 4.0;
        probs[4 * block + 3] = 0.25 * (1.0 + e) / 4.0;
    }

    rng::Engine engine = rng::make_engine(seed, 0);
    std::array<std::int64_t, 16> tallies{};
    std::int64_t remaining = n_trials;
    double prob_remaining = 1.0;
    for (int i = 0; i < 15 && remaining > 0; ++i) {
        const double q = std::clamp(probs[i] / prob_remaining, 0.0, 1.0);
        std::binomial_distribution<std::int64_t> draw(remaining, q);
        tallies[i] = draw(engine);
        remaining -= tallies[i];
        prob_remaining -= probs[i];
    }
    tallies[15] = remaining;

    BellCounts counts{};
    for (int block = 0; block < 4; ++block) {
        counts.blocks[block].n_pp = static_cast<double>(tallies[4 * block + 0]);
        counts.blocks[block].n_pm = static_cast<double>(tallies[4 * block + 1]);
        counts.blocks[block].n_mp = static_cast<double>(tallies[4 * block + 2]);
        counts.blocks[block].n_mm = static_cast<double>(tallies[4 * block + 3]);
    }
    return counts;
}

BellCounts expected_bell_counts(double p, double n_trials) {
    MixedBellState{p}.validate();
    if (!(n_trials > 0.0)) {
        throw std::domain_error("trial count must be positive");
    }
    BellCounts counts{};
    for (int block = 0; block < 4; ++block) {
        const double e = block_correlation(p, block);
        const double per_block = n_trials / 4.0;
        counts.blocks[block].n_pp = per_block * (1.0 + e) / 4.0;
        counts.blocks[block].n_pm = per_block * (1.0 - e) / 4.0;
        counts.blocks[block].n_mp = per_block * (1.0 - e) / 4.0;
        counts.blocks[block].n_mm = per_block * (1.0 + e) / 4.0;
    }
    return counts;
}

std::vector<BellScanCell> bell_mission_scan(const std::vector<double>& p_grid,
                                            const std::vector<double>& y_grid,
                                            const BellScanScenario& scenario) {
    if (p_grid.empty() || y_grid.empty()) {
        throw std::domain_error("scan grids must be non-empty");
    }
    scenario.body.validate();
    const double mu = phys::constants.G * scenario.body.mass;
    const double sync_radius =
        scenario.body.rotation_rate > 0.0
            ? std::cbrt(mu / (scenario.body.rotation_rate *
                              scenario.body.rotation_rate))
            : std::numeric_limits<double>::infinity();

    std::vector<BellScanCell> cells;
    cells.reserve(p_grid.size() * y_grid.size());
    for (double y : y_grid) {
        double range = y;
        double integration = scenario.fixed_integration_time;
        if (scenario.y_is_altitude) {
            const double a = scenario.body.radius + y;
            range = y;
            if (a >= sync_radius) {
                integration = 3600.0;
            } else {
                integration = relorbit::integration_time(
                    relorbit::PassGeometry{a, scenario.theta_m, scenario.body});
                integration = std::min(integration, 3600.0);
            }
        }
        const double eta = linkbudget::link_efficiency(
            scenario.tx, scenario.rx, range, scenario.lambda, scenario.losses);
        const double pair_rate = linkbudget::entangled_pair_rate(
            scenario.source, eta, eta);
        const double pairs = pair_rate * integration;
        for (double p : p_grid) {
            MixedBellState{p}.validate();
            double significance = 0.0;
            if (p > k_inv_sqrt2 && pairs > 0.0) {
                significance = n_sigma(pairs, p);
            }
            cells.push_back({p, y, pairs, significance});
        }
    }
    return cells;
}

double sync_drift_budget(double timing_window, double integration_time) {
    if (!(timing_window >= 0.0)) {
        throw std::domain_error("timing window must be non-negative");
    }
    if (!(integration_time > 0.0)) {
        throw std::domain_error("integration time must be positive");
    }
    return timing_window / integration_time;
}

} // namespace dsql::bellstats
