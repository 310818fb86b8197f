#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dsql/linkbudget.hpp"

namespace dsql::teleportsim {

using Matrix4c = Eigen::Matrix4cd;

/// Two-qubit state in the computational basis {00, 01, 10, 11}.
struct DensityMatrix4 {
    Matrix4c m;

    /// Enforces Hermiticity and unit trace within 1e-12 and eigenvalues
    /// above -1e-10.
    void validate() const;
};

/// |Phi+> = (|00> + |11>)/sqrt(2) as a density matrix.
DensityMatrix4 phi_plus();

/// p |Phi+><Phi+| + (1 - p) I/4.
DensityMatrix4 werner_state(double p);

/// <psi| rho |psi> for a pure target state.
double state_fidelity(const DensityMatrix4& rho, const DensityMatrix4& target);

/// Trace distance (1/2) ||a - b||_1.
double trace_distance(const DensityMatrix4& a, const DensityMatrix4& b);

/// One projective setting of the standard 16-setting two-qubit set.
struct TomographySetting {
    std::string label;  ///< e.g. "HH"
    Matrix4c projector; ///< Rank-1 tensor-product projector
};

/// The fixed 16-setting measurement set used throughout.
const std::array<TomographySetting, 16>& tomography_settings();

/// Counts from one tomography acquisition, equal time per setting.
struct TomographyRun {
    std::array<double, 16> counts; ///< Non-negative tallies per setting
    double n_total;                ///< Expected total signal events

    void validate() const;
};

/// Samples counts[s] ~ Poisson(n_total/16 * Tr(rho Pi_s)) independently
/// per setting. Deterministic under the seed.
TomographyRun simulate_tomography(const DensityMatrix4& rho, double n_total,
                                  std::uint64_t seed);

/// Expected (non-sampled) counts for the same acquisition model.
TomographyRun expected_tomography(const DensityMatrix4& rho, double n_total);

struct MleResult {
    DensityMatrix4 rho;     ///< Physical state (PSD, trace 1) by construction
    bool converged;         ///< False when the iteration cap was hit
    int iterations;
    double log_likelihood;  ///< Poisson log-likelihood at the result
};

/// Maximum-likelihood reconstruction over rho = T^dag T / Tr(T^dag T):
/// gradient ascent with momentum and backtracking on the triangular
/// factor, initialized from linear inversion projected to the physical
/// cone. Stops when the log-likelihood gain drops below 1e-10 or after
/// 5000 iterations (then flagged, best iterate returned).
MleResult mle_reconstruct(const TomographyRun& run);

struct FidelityCell {
    double p;               ///< Werner parameter
    double n_total;         ///< Signal events per tomography
    double mean_fidelity;   ///< Mean over reps vs |Phi+>
    double stddev_fidelity; ///< Population standard deviation over reps
    double mean_iterations;
    bool all_converged;
};

/// One (p, N) cell: reps simulated tomographies, reconstructed and scored
/// against |Phi+>. cell_index fixes the seed streams, so results do not
/// depend on evaluation order or parallelism.
FidelityCell fidelity_map_cell(double p, double n_total, int reps,
                               std::uint64_t seed, std::uint64_t cell_index);

/// Full map over p_grid x n_grid (row-major cell indices).
std::vector<FidelityCell> fidelity_map(const std::vector<double>& p_grid,
                                       const std::vector<double>& n_grid,
                                       int reps, std::uint64_t seed);

/// Downlink scenario for the one-channel event rate.
struct TeleportScenario {
    linkbudget::SourceSpec source;
    linkbudget::OpticalTerminal tx;
    linkbudget::OpticalTerminal rx;
    double lambda;                  ///< [m]
    double range;                   ///< [m]
    linkbudget::LossFactors losses;
    double extra_loss_db;           ///< Additional margin [dB]
};

struct TeleportRate {
    double events_per_s;
};

/// One-channel event rate composed from the link model with the extra
/// dB margin applied on top of the scenario losses.
TeleportRate teleport_scenario_rate(const TeleportScenario& scenario);

/// Integration time to accumulate n events at the given rate [s].
double time_for_counts(double events_per_s, double n);

/// Noise-rate budget for a target purity.
struct NoiseRequirement {
    double max_rate;     ///< Ratio rule: signal (1 - p) / p [1/s]
    double derated_rate; ///< Multi-fold window accounting:
                         ///< signal (1 - p) (2p - 1), floored at 0 [1/s]
};

/// Maximum background rate keeping the teleportation resource at the
/// purity target. Both accountings are returned; the window dt_r only
/// guards against saturation (signal * dt_r must stay below 1).
NoiseRequirement noise_requirement(double signal_rate, double purity_target,
                                   double dt_r);

} // namespace dsql::teleportsim
