#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dsql/linkbudget.hpp"
#include "dsql/relorbit.hpp"

namespace dsql::bellstats {

/// Mixed two-qubit resource: fraction p of a Bell state, remainder white noise.
struct MixedBellState {
    double p; ///< Bell-state fraction in [0, 1]

    void validate() const;
};

/// Coincidence tallies for one CHSH setting pair (a, b):
/// outcomes keyed by which analyzer port fired on each side.
struct CorrelationBlock {
    double n_pp; ///< N(a, b)
    double n_pm; ///< N(a, b_perp)
    double n_mp; ///< N(a_perp, b)
    double n_mm; ///< N(a_perp, b_perp)

    double total() const { return n_pp + n_pm + n_mp + n_mm; }
};

/// The 16 tallies of one CHSH run. Blocks are ordered by setting pair:
/// [0] (a=0,    b= pi/8), [1] (a=0,    b=-pi/8),
/// [2] (a=pi/4, b= pi/8), [3] (a=pi/4, b=-pi/8).
struct BellCounts {
    std::array<CorrelationBlock, 4> blocks;

    double total() const {
        return blocks[0].total() + blocks[1].total() + blocks[2].total() +
               blocks[3].total();
    }
};

/// Source/channel rate model for coincidences and accidentals.
struct RatesModel {
    double r_e;      ///< Entangled-pair rate at the source [1/s]
    double r_i;      ///< Incoherent-pair rate [1/s]
    double eta_a;    ///< Channel efficiency to Alice
    double eta_b;    ///< Channel efficiency to Bob
    double n_a;      ///< Background+dark rate at Alice [1/s]
    double n_b;      ///< Background+dark rate at Bob [1/s]
    double t_window; ///< Coincidence window [s]

    void validate() const;
};

/// Correlation coefficient of one setting block:
/// (N(a,b) + N(a_perp,b_perp) - N(a,b_perp) - N(a_perp,b)) / total.
double correlation_coefficient(const CorrelationBlock& block);

/// CHSH parameter S = E(0,pi/8) + E(0,-pi/8) + E(pi/4,pi/8) - E(pi/4,-pi/8).
double chsh_s(const BellCounts& counts);

/// Expected CHSH parameter for the mixed state: 2 sqrt(2) p.
double expected_s(double p);

/// Standard error of S from N coincidences: sqrt(8 (2 - p^2) / N).
double sigma_s(double n_counts, double p);

/// Violation significance sqrt(N) (p - 1/sqrt(2)) / sqrt(2 - p^2).
/// Negative when p is below the local-realism threshold.
double n_sigma(double n_counts, double p);

/// Smallest integer N with n_sigma(N, p) >= n_target.
/// Throws when p <= 1/sqrt(2) (no violation at any N).
std::int64_t required_counts(double p, double n_target);

/// Accidental coincidence rate with Poisson-validity warning.
struct AccidentalRate {
    double rate;         ///< (r_e eta_a + r_i eta_a + n_a)(r_e eta_b + r_i eta_b + n_b) t
    bool poisson_warning; ///< True when some r*t >= 0.1 (approximation degrades)
};
AccidentalRate accidental_rate(const RatesModel& m);

/// True-pair coincidence rate r_e eta_a eta_b.
double entangled_coincidence_rate(const RatesModel& m);

/// State purity from rates: 1 / (1 + accidental/entangled).
double purity_from_rates(const RatesModel& m);

/// Effective purity (1 - noise_rate * dt_r) * F; rejects saturated noise.
double effective_purity(double fidelity, double noise_rate, double dt_r);

/// Poisson probability of exactly k events: (rt)^k e^{-rt} / k!.
double poisson_window(double rate, double t, int k);

/// Probability of at least one event: 1 - e^{-rt} (~ rt for small rt).
double poisson_at_least_one(double rate, double t);

/// Samples a full CHSH run of n_trials coincidences from the mixed state:
/// settings uniform and independent per trial, outcome correlations
/// E(a, b) = p cos(2(a - b)) with unbiased marginals. Deterministic per seed.
BellCounts simulate_bell_counts(double p, std::int64_t n_trials, std::uint64_t seed);

/// Expected (non-sampled) tallies for n_trials coincidences; useful as the
/// noiseless oracle for chsh_s.
BellCounts expected_bell_counts(double p, double n_trials);

/// One cell of a Bell mission scan.
struct BellScanCell {
    double p;        ///< State purity axis
    double y;        ///< Range [m] or altitude [m] axis value
    double pairs;    ///< Expected coincidences N over the integration time
    double n_sigma;  ///< Violation significance (0 when infeasible)
};

/// Link + pass configuration shared by scan cells.
struct BellScanScenario {
    linkbudget::OpticalTerminal tx;
    linkbudget::OpticalTerminal rx;
    double lambda;                  ///< [m]
    linkbudget::LossFactors losses;
    linkbudget::SourceSpec source;
    relorbit::Body body;            ///< Host body for altitude-mode passes
    double theta_m;                 ///< Pass minimum elevation [rad]
    bool y_is_altitude;             ///< True: y = altitude, T from pass geometry
    double fixed_integration_time;  ///< [s]; used when y_is_altitude is false
};

/// Scans n_sigma over (p grid) x (range-or-altitude grid). Source-to-Alice
/// and source-to-Bob channels are identical. In altitude mode the
/// integration time comes from the pass geometry and is clamped to 1 hour
/// at or above the synchronous radius. Infeasible cells carry n_sigma = 0.
std::vector<BellScanCell> bell_mission_scan(const std::vector<double>& p_grid,
                                            const std::vector<double>& y_grid,
                                            const BellScanScenario& scenario);

/// Allowed clock drift rate: timing window / integration time.
double sync_drift_budget(double timing_window, double integration_time);

} // namespace dsql::bellstats
