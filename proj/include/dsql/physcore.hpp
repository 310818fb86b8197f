#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dsql::phys {

/// Fundamental and astronomical constants used throughout the toolkit.
/// CODATA 2018 values; astronomical values are IAU nominal ones.
/// All quantities SI.
struct PhysicalConstants {
    double G;            ///< Gravitational constant [m^3 kg^-1 s^-2]
    double c;            ///< Speed of light in vacuum [m/s]
    double hbar;         ///< Reduced Planck constant [J s]
    double k_B;          ///< Boltzmann constant [J/K]
    double tau_P;        ///< Planck time [s]
    double T_P;          ///< Planck temperature [K]
    double M_earth;      ///< Earth mass [kg]
    double R_earth;      ///< Earth mean radius [m]
    double Omega_earth;  ///< Earth sidereal rotation rate [rad/s]
    double M_moon;       ///< Moon mass [kg]
    double d_earth_moon; ///< Mean Earth-Moon distance [m]
    double amu;          ///< Atomic mass unit [kg]
    double g0;           ///< Standard surface gravitational acceleration [m/s^2]
};

inline constexpr PhysicalConstants constants{
    6.67430e-11,       // G
    299792458.0,       // c
    1.054571817e-34,   // hbar
    1.380649e-23,      // k_B
    5.391247e-44,      // tau_P
    1.416784e32,       // T_P
    5.9722e24,         // M_earth
    6.371e6,           // R_earth
    7.2921159e-5,      // Omega_earth
    7.342e22,          // M_moon
    3.844e8,           // d_earth_moon
    1.66053906660e-27, // amu
    9.80665,           // g0
};

inline constexpr double pi = std::numbers::pi;

/// Square of the speed of light [m^2/s^2], precomputed for readability.
inline constexpr double c_squared = constants.c * constants.c;

/// Converts a vacuum wavelength to angular frequency, omega = 2*pi*c/lambda.
/// @param lambda vacuum wavelength [m], must be > 0
/// @return angular frequency [rad/s]
inline double wavelength_to_angular_frequency(double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("wavelength_to_angular_frequency: lambda must be > 0");
    return 2.0 * pi * constants.c / lambda;
}

/// Schwarzschild radius r_s = 2GM/c^2 of a mass.
/// @param mass gravitating mass [kg], must be > 0
/// @return r_s [m]
inline double schwarzschild_radius(double mass) {
    if (!(mass > 0.0))
        throw std::domain_error("schwarzschild_radius: mass must be > 0");
    return 2.0 * constants.G * mass / c_squared;
}

} // namespace dsql::phys
