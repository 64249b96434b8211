#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/geometry.hpp"
#include "spdc/interference.hpp"
#include "spdc/materials.hpp"
#include "spdc/units.hpp"

namespace spdc::cli {

/// Environment variable naming the config used when --config is absent.
inline constexpr const char* kConfigEnvVar = "SPDC_CASCADE_CONFIG";

/// Declarative run configuration. Angles are given in degrees in the file
/// and stored here in radians; wavelengths in nm, delays in fs.
struct RunConfig {
    // [crystal]
    DispersionModel material = bbo();
    double thickness_mm = 1.07;
    std::optional<double> second_thickness_mm;
    double cut_angle = deg_to_rad(43.65);
    bool cascade = true;

    // [pump]
    double center_nm = 395.0;
    double bandwidth_nm = 1.0;
    double sigma_scale = 1.0; // multiplies sigma, e.g. 1e-3 for the monochromatic limit

    // [interference]
    double phase0 = 0.0;
    double theta_a = deg_to_rad(45.0);
    double theta_b = deg_to_rad(45.0);
    std::optional<double> tau_a_fs; // closed-form optimum when absent
    std::optional<double> tau_b_fs;
    std::optional<double> beam_a_phi;
    std::optional<double> beam_b_phi;

    // [delay_plate]
    DispersionModel plate = crystal_quartz();

    // [emission_map]
    std::size_t phi_points = kDefaultPhiPoints;
    std::optional<ClassTimes> class_delays; // balancing delays when absent

    // [scan]
    double scan_half_width_fs = 50.0;
    std::optional<double> scan_step_fs; // fringe period / 32 when absent

    // [visibility_curve]
    double curve_half_width_fs = 150.0;
    double curve_step_fs = 1.0;
    std::optional<double> curve_min_fs;
    std::optional<double> curve_max_fs;

    // [polarization]
    double pol_theta_a = deg_to_rad(45.0);
    double pol_theta_b_min = 0.0;
    double pol_theta_b_max = deg_to_rad(180.0);
    double pol_theta_b_step = deg_to_rad(180.0 / 128.0);
    bool lock_fringe = true;

    // [indices]
    std::vector<double> wavelengths_nm;

    PumpSpec pump() const { return {center_nm, bandwidth_nm}; }
    CrystalSpec crystal() const { return {material, thickness_mm, cut_angle, +1}; }
    Cascade cascade_pair() const;
    /// Axial transit times of the first crystal.
    PropagationTimes times() const;
    InterferenceParams interference() const;
};

/// Parses the INI layout documented in configs/bbo_cascade.ini. Unknown sections
/// or keys raise ConfigError; the result is validated before returning.
RunConfig parse_run_config(std::istream& in, std::string_view source,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Checks every module precondition that does not depend on the command.
void validate(const RunConfig& config);

} // namespace spdc::cli
