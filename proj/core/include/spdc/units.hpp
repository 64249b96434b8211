#pragma once

#include <numbers>

// Internal units: wavelength nm, time fs, length mm, angle rad.
namespace spdc {

inline constexpr double kPi = std::numbers::pi;

/// Vacuum speed of light [nm/fs].
inline constexpr double kSpeedOfLight = 299.792458;

/// Millimetres to nanometres.
inline constexpr double kNmPerMm = 1.0e6;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Angular frequency [rad/fs] of vacuum wavelength `wavelength_nm`.
constexpr double angular_frequency(double wavelength_nm) {
    return 2.0 * kPi * kSpeedOfLight / wavelength_nm;
}

/// Time [fs] for light with group index `n_group` to cross `length_mm`.
constexpr double transit_time_fs(double length_mm, double n_group) {
    return length_mm * kNmPerMm * n_group / kSpeedOfLight;
}

} // namespace spdc
