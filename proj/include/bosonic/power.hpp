#pragma once

#include <cmath>
#include <optional>

#include "bosonic/errors.hpp"

namespace bosonic {

/// CODATA 2018 reduced Planck constant [J s].
inline constexpr double kHBar = 1.054571817e-34;
/// Exact SI speed of light [m/s].
inline constexpr double kSpeedOfLight = 299792458.0;

struct PowerThresholds {
    std::optional<double> max_photons_per_mode; // N_max
    std::optional<double> max_power_watts;      // P_max
};

/// Transmitter power bookkeeping for transform-limited pulses:
/// P = hbar * omega0 * Ns * W, reported in watts and dBm.
struct PowerResult {
    double mean_photons_per_mode = 0.0; // N_s
    double bandwidth_hz = 0.0;          // W
    double carrier_omega = 0.0;         // omega_0 [rad/s]
    double power_watts = 0.0;
    double power_dbm = 0.0;
    std::optional<bool> within_photon_budget;
    std::optional<bool> within_power_budget;
};

inline double omega_from_wavelength(double wavelength_m) {
    if (wavelength_m <= 0.0)
        throw InvalidParameter("omega_from_wavelength: wavelength must be positive");
    return 2.0 * M_PI * kSpeedOfLight / wavelength_m;
}

inline PowerResult power_calc(double mean_photons_per_mode, double carrier_omega,
                              double bandwidth_hz, const PowerThresholds& thresholds = {}) {
    if (mean_photons_per_mode <= 0.0 || carrier_omega <= 0.0 || bandwidth_hz <= 0.0)
        throw InvalidParameter("power_calc: all inputs must be positive");
    PowerResult r;
    r.mean_photons_per_mode = mean_photons_per_mode;
    r.bandwidth_hz = bandwidth_hz;
    r.carrier_omega = carrier_omega;
    r.power_watts = kHBar * carrier_omega * mean_photons_per_mode * bandwidth_hz;
    r.power_dbm = 10.0 * std::log10(r.power_watts / 1e-3);
    if (thresholds.max_photons_per_mode)
        r.within_photon_budget = mean_photons_per_mode <= *thresholds.max_photons_per_mode;
    if (thresholds.max_power_watts)
        r.within_power_budget = r.power_watts <= *thresholds.max_power_watts;
    return r;
}

/// Photon flux [1/s] carried by the given power at the given carrier.
inline double photons_per_second(double power_watts, double carrier_omega) {
    if (power_watts <= 0.0 || carrier_omega <= 0.0)
        throw InvalidParameter("photons_per_second: inputs must be positive");
    return power_watts / (kHBar * carrier_omega);
}

} // namespace bosonic
