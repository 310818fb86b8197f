#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "dsql/homsim.hpp"
#include "dsql/physcore.hpp"
#include "dsql/relorbit.hpp"
#include "dsql/rng.hpp"

using namespace dsql;
using homsim::HomGeometry;
using homsim::HomScanMode;
using homsim::HomScanScenario;

namespace {
HomGeometry gateway_geometry(double ell) {
    const auto& k = phys::constants;
    const double gm = k.G * k.M_earth;
    return {ell,
            0.0,
            0.0,
            0.0,
            k.Omega_earth * k.R_earth * k.Omega_earth * k.R_earth,
            1022.0 * 1022.0,
            -gm / k.R_earth,
            -gm / k.d_earth_moon,
            0.0};
}
} // namespace

TEST_CASE("two-photon dip for identical photons") {
    const double sigma = 1e13;
    CHECK(homsim::hom_dip_degenerate(0.0, sigma) == 0.0);
    CHECK(homsim::hom_dip_degenerate(1.0 / sigma, sigma) ==
          doctest::Approx(0.5 * (1.0 - std::exp(-2.0))).epsilon(1e-12));
    // Distinguishable limit: uncorrelated 50/50 coincidences.
    CHECK(homsim::hom_dip_degenerate(1e3 / sigma, sigma) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(homsim::hom_dip_degenerate(1.0, 0.0), std::domain_error);
}

TEST_CASE("frequency-offset pair beats above the 50% floor") {
    const double sigma = 1e13;
    const double domega = 2e13;
    CHECK(homsim::hom_entangled(0.0, sigma, domega) == 0.0);
    // Half a beat period: the cosine flips sign and coincidences bunch up.
    const double tau_pi = phys::pi / domega;
    CHECK(homsim::hom_entangled(tau_pi, sigma, domega) > 0.5);
    CHECK(homsim::hom_entangled(tau_pi, sigma, 0.0) ==
          doctest::Approx(homsim::hom_dip_degenerate(tau_pi, sigma))
              .epsilon(1e-12));
}

TEST_CASE("noise mixes the coincidence signal toward 1/2") {
    const double sigma = 1e13;
    CHECK(homsim::noisy_coincidence(0.0, sigma, 0.0, 0.95) ==
          doctest::Approx(0.5 * (1.0 - 0.95)).epsilon(1e-12));
    CHECK(homsim::noisy_coincidence(1e-13, sigma, 0.0, 0.0) == 0.5);
    CHECK_THROWS_AS(homsim::noisy_coincidence(0.0, sigma, 0.0, 1.2),
                    std::domain_error);
}

TEST_CASE("coincidence quality factor squares the window survival") {
    CHECK(homsim::quality_factor_hom(1e5, 333e-9, 0.9) ==
          doctest::Approx(0.841058001).epsilon(1e-9));
    CHECK(homsim::quality_factor_hom(0.0, 333e-9, 0.9) ==
          doctest::Approx(0.9).epsilon(1e-15));
    CHECK_THROWS_AS(homsim::quality_factor_hom(1e9, 1e-9, 0.9),
                    std::domain_error);
}

TEST_CASE("relativistic arrival-time shift for the lunar-distance station") {
    const double tau = homsim::relativistic_time_shift(gateway_geometry(1e3));
    CHECK(tau == doctest::Approx(2.2681805e-15).epsilon(1e-6));
    // Linear in the delay length.
    CHECK(homsim::relativistic_time_shift(gateway_geometry(6e3)) ==
          doctest::Approx(6.0 * tau).epsilon(1e-9));
}

TEST_CASE("time shift agrees with the orbital clock-rate bookkeeping") {
    const auto earth = relorbit::Body::earth();
    const double gm = phys::constants.G * earth.mass;
    const double r = 7e6;
    const double v_ground = earth.surface_speed();
    const HomGeometry geo{1e3,          0.0, 0.0, 0.0, v_ground * v_ground,
                          gm / r,       -gm / earth.radius,
                          -gm / r,      0.0};
    const double tau = homsim::relativistic_time_shift(geo);
    const double expected = relorbit::epsilon_observatory(earth) -
                            relorbit::epsilon_satellite_circular(r, earth);
    CHECK(tau * phys::constants.c / geo.ell ==
          doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("net delay assembles the independent contributions") {
    HomGeometry geo{6e3, 0.0, 0.0, 1e3, 0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(homsim::total_time_shift(geo) ==
          doctest::Approx(6.6759003e-11).epsilon(1e-9));
    geo.tau_c = 1e-12;
    CHECK(homsim::total_time_shift(geo) ==
          doctest::Approx(6.6759003e-11 + 1e-12).epsilon(1e-9));

    // Without Doppler, mismatch, or control terms the net delay reduces to
    // the relativistic shift.
    const HomGeometry gw = gateway_geometry(1e3);
    CHECK(homsim::total_time_shift(gw) ==
          doctest::Approx(homsim::relativistic_time_shift(gw)).epsilon(1e-5));
}

TEST_CASE("interference phase from the frequency offset") {
    const double domega =
        std::abs(phys::wavelength_to_angular_frequency(1.5e-6) -
                 phys::wavelength_to_angular_frequency(1.6e-6));
    CHECK(domega == doctest::Approx(7.8485482e13).epsilon(1e-6));
    CHECK(homsim::hom_phase_shift(domega, 2.2681805e-15) ==
          doctest::Approx(0.17801924).epsilon(1e-5));
    CHECK(homsim::hom_phase_shift(domega, 0.0) == 0.0);
}

TEST_CASE("per-coincidence timing error") {
    CHECK(std::isinf(homsim::timing_error(0.0, 1e13, 0.0, 0.95)));
    CHECK(std::isinf(homsim::timing_error(1e-13, 1e13, 0.0, 0.0)));
    CHECK_THROWS_AS(homsim::timing_error(1e-13, 0.0, 0.0, 0.95),
                    std::domain_error);
    CHECK_THROWS_AS(homsim::timing_error(1e-13, 1e13, 0.0, 1.5),
                    std::domain_error);
}

TEST_CASE("optimal timing operating points") {
    const auto deg = homsim::optimal_timing_error(1e13, 0.0, 0.95);
    CHECK(deg.dtau_opt == doctest::Approx(6.3877783e-14).epsilon(1e-6));
    CHECK(deg.tau_opt == doctest::Approx(3.1117144e-14).epsilon(1e-3));

    // Pure 1/sigma scaling in the degenerate case.
    const auto deg47 = homsim::optimal_timing_error(4.7e13, 0.0, 0.95);
    CHECK(deg47.dtau_opt ==
          doctest::Approx(deg.dtau_opt * 1e13 / 4.7e13).epsilon(1e-6));

    // Non-degenerate pair at the bandwidth cap against the 780/1550 offset.
    const double domega =
        std::abs(phys::wavelength_to_angular_frequency(780e-9) -
                 phys::wavelength_to_angular_frequency(1550e-9));
    CHECK(domega == doctest::Approx(1.1996788e15).epsilon(1e-6));
    const auto nondeg = homsim::optimal_timing_error(4.7e13, domega, 0.95);
    CHECK(nondeg.dtau_opt == doctest::Approx(8.8281248e-16).epsilon(1e-6));
    CHECK(deg47.dtau_opt / nondeg.dtau_opt ==
          doctest::Approx(15.395136).epsilon(1e-4));

    // A beat at twice the bandwidth already improves the clock transfer.
    const auto beat = homsim::optimal_timing_error(1e13, 2e13, 0.95);
    const double gain = deg.dtau_opt / beat.dtau_opt;
    CHECK(gain == doctest::Approx(1.4538714).epsilon(1e-4));
    CHECK(gain > 1.25);
    CHECK(gain < 1.65);
}

TEST_CASE("analytic timing error matches the Monte-Carlo ML spread") {
    const double sigma = 1e13;
    const double domega = 1.5e13;
    const double p = 0.9;
    const auto opt = homsim::optimal_timing_error(sigma, domega, p);
    const double tau_star = opt.tau_opt;
    const double p_true =
        homsim::noisy_coincidence(tau_star, sigma, domega, p);
    const double predicted =
        homsim::timing_error(tau_star, sigma, domega, p) / 100.0; // N = 1e4

    // Coincidence probability rises monotonically from tau = 0 until the
    // first stationary point of the beat, well beyond the operating point;
    // the ML estimate is the unique preimage on that stretch.
    double tau_hi = tau_star;
    while (4.0 * tau_hi * sigma * sigma * std::cos(domega * tau_hi) +
               domega * std::sin(domega * tau_hi) >
           0.0) {
        tau_hi += 0.01 * tau_star;
    }
    tau_hi -= 0.01 * tau_star;
    const auto invert = [&](double target) {
        double lo = 0.02 * tau_star;
        double hi = tau_hi;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (homsim::noisy_coincidence(mid, sigma, domega, p) < target) {
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
        rng::Engine engine = rng::make_engine(90210, r);
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
    CHECK(mean == doctest::Approx(tau_star).epsilon(5e-3));
}

TEST_CASE("redshift-parameter error from a timing budget") {
    CHECK(homsim::alpha_error_hom(1e-15, 6e3, 1.06e7, 1e6) ==
          doctest::Approx(4.2364784e-4).epsilon(1e-6));
    CHECK(homsim::alpha_error_hom(1e-15, 6e3, 1.06e7, 4e6) ==
          doctest::Approx(0.5 * 4.2364784e-4).epsilon(1e-6));
    CHECK(homsim::alpha_error_hom(1e-15, 6e3, 2.12e7, 1e6) ==
          doctest::Approx(0.5 * 4.2364784e-4).epsilon(1e-6));
    CHECK_THROWS_AS(homsim::alpha_error_hom(1e-15, 6e3, 0.0, 1e6),
                    std::domain_error);
    CHECK_THROWS_AS(homsim::alpha_error_hom(1e-15, 6e3, 1.06e7, 0.0),
                    std::domain_error);
}

namespace {
HomScanScenario fig_scan_scenario() {
    return {{1.2, 1.0},
            {0.3, 1.0},
            780e-9,
            1550e-9,
            {1.0, 1.0, 1.0, 1.0, 0.1},
            {1e9, 0.01, 0.95},
            relorbit::Body::earth(),
            20.0 * phys::pi / 180.0,
            0.95,
            6e3};
}

std::vector<double> scan_sigmas() {
    std::vector<double> grid;
    for (int k = 0; k < 6; ++k) grid.push_back(1e13 + k * (3.7e13 / 5.0));
    return grid;
}

std::vector<double> scan_altitudes() {
    std::vector<double> grid;
    for (int k = 0; k < 27; ++k) grid.push_back(400e3 + k * 100e3);
    return grid;
}
} // namespace

TEST_CASE("degenerate scan reference cell and arg-min") {
    const auto result =
        homsim::hom_alpha_scan(scan_sigmas(), scan_altitudes(),
                               HomScanMode::degenerate, fig_scan_scenario());
    CHECK(result.argmin_sigma == doctest::Approx(4.7e13).epsilon(1e-12));
    CHECK(result.argmin_altitude == 1.3e6);
    CHECK(result.min_delta_alpha ==
          doctest::Approx(5.9017805e-3).epsilon(1e-6));

    bool found = false;
    for (const auto& cell : result.cells) {
        if (cell.sigma == result.argmin_sigma && cell.altitude == 1.3e6) {
            found = true;
            CHECK(cell.feasible);
            CHECK(cell.n_pairs == doctest::Approx(951287.77).epsilon(1e-6));
            CHECK(cell.delta_alpha ==
                  doctest::Approx(5.9017805e-3).epsilon(1e-6));
        }
    }
    CHECK(found);
}

TEST_CASE("non-degenerate scan prefers narrow bandwidth at lower altitude") {
    const auto result = homsim::hom_alpha_scan(
        scan_sigmas(), scan_altitudes(), HomScanMode::nondegenerate,
        fig_scan_scenario());
    CHECK(result.argmin_sigma == doctest::Approx(1e13).epsilon(1e-12));
    CHECK(result.argmin_altitude == 9e5);
    CHECK(result.min_delta_alpha ==
          doctest::Approx(5.5799598e-4).epsilon(1e-6));

    for (const auto& cell : result.cells) {
        if (cell.sigma == 1e13 && cell.altitude == 9e5) {
            CHECK(cell.n_pairs == doctest::Approx(831984.43).epsilon(1e-6));
        }
    }
}

TEST_CASE("scan rejects bandwidths beyond the hardware cap") {
    CHECK_THROWS_AS(
        homsim::hom_alpha_scan({5e13}, {9e5}, HomScanMode::degenerate,
                               fig_scan_scenario()),
        std::domain_error);
    CHECK_THROWS_AS(
        homsim::hom_alpha_scan({}, {9e5}, HomScanMode::degenerate,
                               fig_scan_scenario()),
        std::domain_error);
}

TEST_CASE("geometry and source validation") {
    homsim::HomSource src{1.0, 1.0, 1e13, false}; // flag contradicts equality
    CHECK_THROWS_AS(src.validate(), std::domain_error);
    src.degenerate = true;
    CHECK_NOTHROW(src.validate());

    HomGeometry geo = gateway_geometry(1e3);
    geo.delta_ell = 10.0; // 1% of ell is far outside the matched regime
    CHECK_THROWS_AS(homsim::relativistic_time_shift(geo), std::domain_error);
}
