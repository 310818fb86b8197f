#include "dsql/teleportsim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>

#include "dsql/rng.hpp"

namespace dsql::teleportsim {

namespace {

using Complex = std::complex<double>;
using Vector2c = Eigen::Vector2cd;

constexpr double k_hermitian_tol = 1e-12;
constexpr double k_trace_tol = 1e-12;
constexpr double k_eigen_floor = -1e-10;
constexpr double k_ll_tol = 1e-10;
constexpr int k_max_iterations = 20000;

Vector2c single_qubit_ket(char c) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (c) {
    case 'H': return Vector2c(1.0, 0.0);
    case 'V': return Vector2c(0.0, 1.0);
    case 'D': return Vector2c(s, s);
    case 'A': return Vector2c(s, -s);
    case 'R': return Vector2c(s, Complex(0.0, s));
    case 'L': return Vector2c(s, Complex(0.0, -s));
    default: throw std::domain_error("unknown analyzer ket");
    }
}

std::array<TomographySetting, 16> build_settings() {
    // Canonical 16-setting tomography order.
    const std::array<const char*, 16> labels = {
        "HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
        "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"};
    std::array<TomographySetting, 16> out;
    for (std::size_t s = 0; s < labels.size(); ++s) {
        const Vector2c a = single_qubit_ket(labels[s][0]);
        const Vector2c b = single_qubit_ket(labels[s][1]);
        Eigen::Vector4cd ket;
        ket << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
        out[s].label = labels[s];
        out[s].projector = ket * ket.adjoint();
    }
    return out;
}

/// Tr(rho Pi) for a rank-1 projector, clipped to [0, 1] against roundoff.
double projection_probability(const Matrix4c& rho, const Matrix4c& projector) {
    const double value = (rho * projector).trace().real();
    return std::clamp(value, 0.0, 1.0);
}

/// Physical projection: clamp negative eigenvalues, renormalize trace.
Matrix4c project_physical(const Matrix4c& rho) {
    const Matrix4c herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(herm);
    Eigen::Vector4d vals = solver.eigenvalues().cwiseMax(0.0);
    const double total = vals.sum();
    if (total <= 0.0) {
        return Matrix4c::Identity() / 4.0;
    }
    vals /= total;
    return solver.eigenvectors() * vals.asDiagonal() *
           solver.eigenvectors().adjoint();
}

Matrix4c kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

/// Least-squares inversion of the 16 setting frequencies over the
/// Hermitian product-operator basis, then projection to the physical cone.
Matrix4c linear_inversion(const TomographyRun& run) {
    std::array<Matrix4c, 16> basis;
    {
        std::array<Eigen::Matrix2cd, 4> pauli;
        pauli[0] = Eigen::Matrix2cd::Identity();
        pauli[1] << 0.0, 1.0, 1.0, 0.0;
        pauli[2] << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
        pauli[3] << 1.0, 0.0, 0.0, -1.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                basis[4 * i + j] = kron2(pauli[i], pauli[j]);
            }
        }
    }
    const auto& settings = tomography_settings();
    Eigen::Matrix<double, 16, 16> design;
    Eigen::Matrix<double, 16, 1> rhs;
    const double per_setting = run.n_total / 16.0;
    for (int s = 0; s < 16; ++s) {
        for (int k = 0; k < 16; ++k) {
            design(s, k) =
                0.25 * (settings[s].projector * basis[k]).trace().real();
        }
        rhs(s) = run.counts[s] / per_setting;
    }
    const Eigen::Matrix<double, 16, 1> coords =
        design.colPivHouseholderQr().solve(rhs);
    Matrix4c rho = Matrix4c::Zero();
    for (int k = 0; k < 16; ++k) {
        rho += 0.25 * coords(k) * basis[k];
    }
    return project_physical(rho);
}

/// Upper-triangular factor with rho = T^dag T / Tr(T^dag T).
Matrix4c factor_from_state(const Matrix4c& rho) {
    const Matrix4c padded =
        (rho + 1e-12 * Matrix4c::Identity()) / (1.0 + 4e-12);
    Eigen::LLT<Matrix4c> llt(padded);
    if (llt.info() != Eigen::Success) {
        return Matrix4c::Identity() * 0.5;
    }
    return Matrix4c(llt.matrixL()).adjoint();
}

Matrix4c keep_upper_triangular(const Matrix4c& m) {
    Matrix4c out = Matrix4c::Zero();
    for (int r = 0; r < 4; ++r) {
        for (int c = r; c < 4; ++c) {
            out(r, c) = m(r, c);
        }
    }
    return out;
}

struct Likelihood {
    double value;
    std::array<double, 16> mu;
};

Likelihood poisson_log_likelihood(const Matrix4c& factor,
                                  const TomographyRun& run) {
    const Matrix4c gram = factor.adjoint() * factor;
    const double trace = gram.trace().real();
    const auto& settings = tomography_settings();
    Likelihood out{0.0, {}};
    for (int s = 0; s < 16; ++s) {
        const double q = (gram * settings[s].projector).trace().real();
        double mu = (run.n_total / 16.0) * (q / trace);
        mu = std::max(mu, 1e-300);
        out.mu[s] = mu;
        out.value += run.counts[s] * std::log(mu) - mu;
    }
    return out;
}

/// Wirtinger gradient of the Poisson log-likelihood with respect to the
/// conjugate factor, restricted to the upper-triangular parametrization.
Matrix4c likelihood_gradient(const Matrix4c& factor, const TomographyRun& run,
                             const Likelihood& at) {
    const Matrix4c gram = factor.adjoint() * factor;
    const double trace = gram.trace().real();
    const auto& settings = tomography_settings();
    Matrix4c weighted = Matrix4c::Zero();
    double mixture = 0.0;
    for (int s = 0; s < 16; ++s) {
        const double q = (gram * settings[s].projector).trace().real();
        const double c = run.counts[s] / at.mu[s] - 1.0;
        weighted += c * settings[s].projector;
        mixture += c * q / trace;
    }
    const Matrix4c grad =
        (run.n_total / (16.0 * trace)) * (factor * weighted - mixture * factor);
    return keep_upper_triangular(grad);
}

} // namespace

void DensityMatrix4::validate() const {
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > k_hermitian_tol) {
        throw std::domain_error("density matrix must be Hermitian");
    }
    if (std::abs(m.trace().real() - 1.0) > k_trace_tol ||
        std::abs(m.trace().imag()) > k_trace_tol) {
        throw std::domain_error("density matrix must have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(m,
                                                   Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < k_eigen_floor) {
        throw std::domain_error("density matrix must be positive");
    }
}

DensityMatrix4 phi_plus() {
    Eigen::Vector4cd ket;
    const double s = 1.0 / std::sqrt(2.0);
    ket << s, 0.0, 0.0, s;
    return DensityMatrix4{ket * ket.adjoint()};
}

DensityMatrix4 werner_state(double p) {
    if (p < 0.0 || p > 1.0) {
        throw std::domain_error("mixing parameter must lie in [0, 1]");
    }
    const Matrix4c pure = phi_plus().m;
    return DensityMatrix4{p * pure +
                          (1.0 - p) * Matrix4c::Identity() / 4.0};
}

double state_fidelity(const DensityMatrix4& rho,
                      const DensityMatrix4& target) {
    const double purity = (target.m * target.m).trace().real();
    if (std::abs(purity - 1.0) > 1e-6) {
        throw std::domain_error("fidelity target must be a pure state");
    }
    return std::clamp((rho.m * target.m).trace().real(), 0.0, 1.0);
}

double trace_distance(const DensityMatrix4& a, const DensityMatrix4& b) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(a.m - b.m,
                                                   Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

const std::array<TomographySetting, 16>& tomography_settings() {
    static const std::array<TomographySetting, 16> settings = build_settings();
    return settings;
}

void TomographyRun::validate() const {
    if (!(n_total > 0.0)) {
        throw std::domain_error("total event number must be positive");
    }
    for (double c : counts) {
        if (!(c >= 0.0)) {
            throw std::domain_error("counts must be non-negative");
        }
    }
}

TomographyRun simulate_tomography(const DensityMatrix4& rho, double n_total,
                                  std::uint64_t seed) {
    if (!(n_total > 0.0)) {
        throw std::domain_error("total event number must be positive");
    }
    rho.validate();
    const auto& settings = tomography_settings();
    rng::Engine engine = rng::make_engine(seed, 0);
    TomographyRun run{};
    run.n_total = n_total;
    for (int s = 0; s < 16; ++s) {
        const double mean =
            (n_total / 16.0) * projection_probability(rho.m,
                                                      settings[s].projector);
        if (mean > 0.0) {
            std::poisson_distribution<long long> draw(mean);
            run.counts[s] = static_cast<double>(draw(engine));
        } else {
            run.counts[s] = 0.0;
        }
    }
    return run;
}

TomographyRun expected_tomography(const DensityMatrix4& rho, double n_total) {
    if (!(n_total > 0.0)) {
        throw std::domain_error("total event number must be positive");
    }
    rho.validate();
    const auto& settings = tomography_settings();
    TomographyRun run{};
    run.n_total = n_total;
    for (int s = 0; s < 16; ++s) {
        run.counts[s] =
            (n_total / 16.0) * projection_probability(rho.m,
                                                      settings[s].projector);
    }
    return run;
}

MleResult mle_reconstruct(const TomographyRun& run) {
    run.validate();
    Matrix4c factor = factor_from_state(linear_inversion(run));
    Likelihood best = poisson_log_likelihood(factor, run);

    double step = 1.0 / std::max(run.n_total, 1.0);
    const double momentum = 0.8;
    Matrix4c velocity = Matrix4c::Zero();
    int iterations = 0;
    bool converged = false;

    while (iterations < k_max_iterations) {
        ++iterations;
        const Matrix4c grad = likelihood_gradient(factor, run, best);
        bool accepted = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            const Matrix4c trial_velocity = momentum * velocity + step * grad;
            const Matrix4c trial = factor + trial_velocity;
            const Likelihood candidate = poisson_log_likelihood(trial, run);
            if (candidate.value > best.value) {
                const double gain = candidate.value - best.value;
                factor = trial;
                velocity = trial_velocity;
                best = candidate;
                step *= 1.2;
                accepted = true;
                if (gain < k_ll_tol) {
                    converged = true;
                }
                break;
            }
            velocity = Matrix4c::Zero();
            step *= 0.5;
        }
        if (!accepted) {
            converged = true; // no ascent direction left at float precision
        }
        if (converged) {
            break;
        }
    }

    const Matrix4c gram = factor.adjoint() * factor;
    Matrix4c rho = gram / gram.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    return MleResult{DensityMatrix4{rho}, converged, iterations, best.value};
}

FidelityCell fidelity_map_cell(double p, double n_total, int reps,
                               std::uint64_t seed, std::uint64_t cell_index) {
    if (reps <= 0) {
        throw std::domain_error("repetition count must be positive");
    }
    const DensityMatrix4 target = phi_plus();
    const DensityMatrix4 state = werner_state(p);
    FidelityCell cell{p, n_total, 0.0, 0.0, 0.0, true};
    std::vector<double> fidelities;
    fidelities.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        const std::uint64_t stream = rng::cell_seed(
            seed, cell_index * static_cast<std::uint64_t>(reps) +
                      static_cast<std::uint64_t>(r));
        const TomographyRun run = simulate_tomography(state, n_total, stream);
        const MleResult fit = mle_reconstruct(run);
        fidelities.push_back(state_fidelity(fit.rho, target));
        cell.mean_iterations += fit.iterations;
        cell.all_converged = cell.all_converged && fit.converged;
    }
    double mean = 0.0;
    for (double f : fidelities) {
        mean += f;
    }
    mean /= static_cast<double>(reps);
    double variance = 0.0;
    for (double f : fidelities) {
        variance += (f - mean) * (f - mean);
    }
    variance /= static_cast<double>(reps);
    cell.mean_fidelity = mean;
    cell.stddev_fidelity = std::sqrt(variance);
    cell.mean_iterations /= static_cast<double>(reps);
    return cell;
}

std::vector<FidelityCell> fidelity_map(const std::vector<double>& p_grid,
                                       const std::vector<double>& n_grid,
                                       int reps, std::uint64_t seed) {
    std::vector<FidelityCell> cells;
    cells.reserve(p_grid.size() * n_grid.size());
    std::uint64_t cell_index = 0;
    for (double p : p_grid) {
        for (double n : n_grid) {
            cells.push_back(fidelity_map_cell(p, n, reps, seed, cell_index));
            ++cell_index;
        }
    }
    return cells;
}

TeleportRate teleport_scenario_rate(const TeleportScenario& scenario) {
    if (scenario.extra_loss_db < 0.0) {
        throw std::domain_error("extra loss must be non-negative dB");
    }
    const double eta = linkbudget::link_efficiency(
        scenario.tx, scenario.rx, scenario.range, scenario.lambda,
        scenario.losses);
    const double margin = std::pow(10.0, -scenario.extra_loss_db / 10.0);
    const double rate = linkbudget::entangled_one_channel_rate(
        scenario.source, eta * margin);
    return TeleportRate{rate};
}

double time_for_counts(double events_per_s, double n) {
    if (!(events_per_s > 0.0)) {
        throw std::domain_error("event rate must be positive");
    }
    if (n < 0.0) {
        throw std::domain_error("event number must be non-negative");
    }
    return n / events_per_s;
}

NoiseRequirement noise_requirement(double signal_rate, double purity_target,
                                   double dt_r) {
    if (!(signal_rate > 0.0)) {
        throw std::domain_error("signal rate must be positive");
    }
    if (!(purity_target > 0.0) || purity_target >= 1.0) {
        throw std::domain_error("purity target must lie in (0, 1)");
    }
    if (!(dt_r > 0.0)) {
        throw std::domain_error("resolution window must be positive");
    }
    if (signal_rate * dt_r >= 1.0) {
        throw std::domain_error("signal saturates the resolution window");
    }
    const double slack = signal_rate * (1.0 - purity_target);
    NoiseRequirement out{};
    out.max_rate = slack / purity_target;
    out.derated_rate = std::max(slack * (2.0 * purity_target - 1.0), 0.0);
    return out;
}

} // namespace dsql::teleportsim
