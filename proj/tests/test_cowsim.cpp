#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "dsql/cowsim.hpp"
#include "dsql/physcore.hpp"
#include "dsql/rng.hpp"

using namespace dsql;
using cowsim::CowInterferometer;
using cowsim::CowSignalModel;

namespace {
const CowSignalModel ref_model{1e13, 0.93, 0.95, 1e-9};
CowInterferometer ref_ifo() {
    return cowsim::make_interferometer(1550e-9, 4e5, 6e3,
                                       phys::constants.g0);
}
} // namespace

TEST_CASE("interferometer construction and validation") {
    const CowInterferometer ifo = ref_ifo();
    CHECK(ifo.omega0 ==
          doctest::Approx(phys::wavelength_to_angular_frequency(1550e-9))
              .epsilon(1e-15));

    CowInterferometer bad = ifo;
    bad.omega0 *= 1.001; // inconsistent with the stored wavelength
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    CHECK_THROWS_AS(cowsim::make_interferometer(0.0, 4e5, 6e3, 9.8),
                    std::domain_error);
    CHECK_THROWS_AS(cowsim::make_interferometer(1550e-9, -1.0, 6e3, 9.8),
                    std::domain_error);
    CHECK_THROWS_AS(cowsim::make_interferometer(1550e-9, 4e5, 0.0, 9.8),
                    std::domain_error);
}

TEST_CASE("gravitational phase at the 400 km / 6 km reference") {
    CHECK(cowsim::gravitational_phase(ref_ifo()) ==
          doctest::Approx(1.0615457).epsilon(1e-6));

    // (1 + alpha) scaling and the explicit-potential form.
    CowInterferometer doubled = ref_ifo();
    doubled.alpha = 1.0;
    CHECK(cowsim::gravitational_phase(doubled) ==
          doctest::Approx(2.0 * 1.0615457).epsilon(1e-6));
    const double from_potential = cowsim::gravitational_phase_from_potential(
        ref_ifo(), phys::constants.g0 * 4e5);
    CHECK(from_potential ==
          doctest::Approx(cowsim::gravitational_phase(ref_ifo()))
              .epsilon(1e-12));
}

TEST_CASE("line-of-sight Doppler phase") {
    CHECK(cowsim::doppler_phase(1.5e-6, 1e4, 1e4) ==
          doctest::Approx(1.3972300e6).epsilon(1e-6));
    CHECK(cowsim::doppler_phase(1.5e-6, 1e4, -1e4) ==
          doctest::Approx(-1.3972300e6).epsilon(1e-6));
    CHECK_THROWS_AS(cowsim::doppler_phase(0.0, 1e4, 1e4), std::domain_error);
}

TEST_CASE("detection probability") {
    CHECK(cowsim::detection_probability(1.2, ref_model, ref_ifo()) ==
          doctest::Approx(0.33153650).epsilon(1e-6));
    // Zero phase: the envelope is exactly 1, so P = (1 - p)/2.
    CHECK(cowsim::detection_probability(0.0, ref_model, ref_ifo()) ==
          doctest::Approx(0.5 * (1.0 - 0.93)).epsilon(1e-12));
    CowSignalModel flat = ref_model;
    flat.p = 0.0;
    CHECK(cowsim::detection_probability(1.2, flat, ref_ifo()) == 0.5);
}

TEST_CASE("per-event phase error and the frequency-scaled variant") {
    const double err = cowsim::phase_error(1.2, ref_model, ref_ifo());
    CHECK(err == doctest::Approx(1.0862937).epsilon(1e-6));

    const double raw = cowsim::phase_error_raw(1.2, ref_model, ref_ifo());
    CHECK(raw == doctest::Approx(8.9399124e-16).epsilon(1e-6));
    // The variant carries an extra 1/omega0 scale at interferometric phases.
    CHECK(raw * ref_ifo().omega0 == doctest::Approx(err).epsilon(1e-3));

    // Stationary point: zero slope means no phase information.
    CHECK(std::isinf(cowsim::phase_error(0.0, ref_model, ref_ifo())));
    CowSignalModel flat = ref_model;
    flat.p = 0.0;
    CHECK(std::isinf(cowsim::phase_error(1.2, flat, ref_ifo())));
}

TEST_CASE("optimal phase operating point") {
    CowSignalModel model = ref_model;
    model.p = 0.9;
    const auto opt = cowsim::optimal_phase_error(model, ref_ifo());
    CHECK(opt.dphi_opt == doctest::Approx(1.1114803).epsilon(1e-6));
    CHECK(opt.phi_opt == doctest::Approx(1.56635).epsilon(0.01));

    // Closed form: the minimum sits near the quadrature point, where the
    // error reduces to 1/(p E(pi/2)).
    const double omega0 = ref_ifo().omega0;
    const double ratio = model.sigma * (phys::pi / 2.0) / omega0;
    const double envelope = std::exp(-2.0 * ratio * ratio);
    CHECK(opt.dphi_opt ==
          doctest::Approx(1.0 / (model.p * envelope)).epsilon(1e-4));

    // 1/p scaling of the optimum.
    model.p = 0.5;
    const auto half = cowsim::optimal_phase_error(model, ref_ifo());
    CHECK(half.dphi_opt * 0.5 == doctest::Approx(1.1114803 * 0.9).epsilon(1e-3));

    // Noise-free, narrow-band limit: one radian per event.
    const CowSignalModel ideal{1e10, 1.0, 1.0, 1e-9};
    const auto unit = cowsim::optimal_phase_error(ideal, ref_ifo());
    CHECK(unit.dphi_opt == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quality factor from noise load") {
    CHECK(cowsim::quality_factor(1e5, 333e-9, 0.9) ==
          doctest::Approx((1.0 - 1e5 * 333e-9) * 0.9).epsilon(1e-12));
    CHECK(cowsim::quality_factor(0.0, 333e-9, 0.9) == doctest::Approx(0.9));
    CHECK_THROWS_AS(cowsim::quality_factor(1e9, 1e-9, 0.9), std::domain_error);
    CHECK_THROWS_AS(cowsim::quality_factor(1e3, 1e-9, 1.2), std::domain_error);
}

TEST_CASE("analytic phase error matches the Monte-Carlo ML spread") {
    const CowInterferometer ifo = ref_ifo();
    const double phi_star = 1.2;
    const double p_true =
        cowsim::detection_probability(phi_star, ref_model, ifo);
    const double predicted =
        cowsim::phase_error(phi_star, ref_model, ifo) / 100.0; // N = 1e4

    // The click probability is strictly increasing on this bracket, so the
    // ML estimate is the unique preimage of the observed frequency.
    const auto invert = [&](double target) {
        double lo = 0.05;
        double hi = phys::pi - 0.05;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (cowsim::detection_probability(mid, ref_model, ifo) < target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    const int reps = 500;
    const std::int64_t n = 10000;
    std::vector<double> estimates;
    estimates.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        rng::Engine engine = rng::make_engine(20260814, r);
        std::binomial_distribution<std::int64_t> draw(n, p_true);
        const double freq =
            static_cast<double>(draw(engine)) / static_cast<double>(n);
        estimates.push_back(invert(freq));
    }
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= reps;
    double var = 0.0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    const double sd = std::sqrt(var / reps);

    CHECK(std::abs(sd / predicted - 1.0) < 0.10);
    CHECK(mean == doctest::Approx(phi_star).epsilon(5e-3));
}

namespace {
cowsim::CowScanScenario fig_scan_scenario() {
    return {{1.0, 1.5},
            {0.3, 1.5},
            1550e-9,
            {1.0, 1.0, 1.0, 1.0, 0.05},
            {1e6, 1.0, 0.95},
            relorbit::Body::earth(),
            20.0 * phys::pi / 180.0,
            {1e13, 0.95, 0.95, 1e-9},
            6e3,
            1.0,
            true,
            phys::constants.g0};
}
} // namespace

TEST_CASE("redshift-parameter scan at the 1250 km reference cell") {
    const auto result =
        cowsim::alpha_error_scan({1.25e6}, fig_scan_scenario());
    REQUIRE(result.cells.size() == 1);
    const auto& cell = result.cells[0];
    CHECK(cell.feasible);
    CHECK(cell.n_photons == doctest::Approx(1.2762527e6).epsilon(1e-6));
    CHECK(cell.phi_gr == doctest::Approx(2.7770809).epsilon(1e-6));
    CHECK(cell.dphi_opt == doctest::Approx(1.0529795).epsilon(1e-6));
    CHECK(cell.delta_alpha == doctest::Approx(3.3563176e-4).epsilon(1e-6));
}

TEST_CASE("scan argmin sits between the flux and signal regimes") {
    const auto result = cowsim::alpha_error_scan({9e5, 1.25e6, 1.5e6},
                                                 fig_scan_scenario());
    CHECK(result.argmin_altitude == 1.25e6);
    CHECK(result.min_delta_alpha ==
          doctest::Approx(3.3563176e-4).epsilon(1e-6));
}

TEST_CASE("scan handles super-synchronous altitudes as infeasible") {
    const auto result =
        cowsim::alpha_error_scan({1.25e6, 4e7}, fig_scan_scenario());
    REQUIRE(result.cells.size() == 2);
    CHECK(!result.cells[1].feasible);
    CHECK(result.cells[1].n_photons == 0.0);
    CHECK(std::isinf(result.cells[1].delta_alpha));
    CHECK(result.argmin_altitude == 1.25e6);
}

TEST_CASE("scan validates its configuration") {
    CHECK_THROWS_AS(cowsim::alpha_error_scan({}, fig_scan_scenario()),
                    std::domain_error);
    CHECK_THROWS_AS(cowsim::alpha_error_scan({-1.0}, fig_scan_scenario()),
                    std::domain_error);
    auto thin = fig_scan_scenario();
    thin.refractive_index = 0.5;
    CHECK_THROWS_AS(cowsim::alpha_error_scan({1.25e6}, thin),
                    std::domain_error);
}

TEST_CASE("uniform-field scan mode reproduces the closed-form phase") {
    auto scenario = fig_scan_scenario();
    scenario.altitude_dependent_g = false;
    const auto result = cowsim::alpha_error_scan({1.25e6}, scenario);
    const auto ifo = cowsim::make_interferometer(1550e-9, 1.25e6, 6e3,
                                                 phys::constants.g0);
    CHECK(result.cells[0].phi_gr ==
          doctest::Approx(cowsim::gravitational_phase(ifo)).epsilon(1e-12));
}
