#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spdc/materials.hpp"
#include "spdc/vec3.hpp"

namespace spdc {

/// Two crystals in contact with mirrored optic axes (+psi, -psi). The pump
/// enters `first`.
struct Cascade {
    CrystalSpec first;
    CrystalSpec second;
};

Cascade make_cascade(const DispersionModel& model, double thickness_mm, double cut_angle);
Cascade make_cascade(const DispersionModel& model, double first_thickness_mm,
                     double second_thickness_mm, double cut_angle);

/// Requires equal cut angles, opposite axis signs and the same material.
void validate(const Cascade& cascade);

/// A degenerate pair phase matched in one crystal. The e photon travels at
/// `azimuth`, its o partner at `azimuth + pi`. Angles are internal.
struct PhaseMatchedPair {
    double azimuth = 0.0;
    double e_polar = 0.0;
    double o_polar = 0.0;
    double e_index = 0.0;
    double o_index = 0.0;
    double e_axis_angle = 0.0; // between the e wavevector and the optic axis
};

/// n_o + n_e(psi) - 2 n_p(psi) at the degenerate wavelength: the longitudinal
/// mismatch of the collinear configuration. Negative means no cone exists.
double collinear_mismatch(const CrystalSpec& crystal, const PumpSpec& pump);

/// Cut angle at which degenerate type-II emission becomes collinear.
double collinear_cut_angle(const DispersionModel& model, const PumpSpec& pump);

/// Solves transverse and longitudinal momentum matching for the e photon's
/// polar angle at a given azimuth. Throws PhaseMatchError below the collinear
/// cut angle.
PhaseMatchedPair solve_phase_matching(const CrystalSpec& crystal, const PumpSpec& pump,
                                      double e_azimuth);

/// Circular section of an emission cone in the x-z plane: signed tilt of the
/// axis towards +x, and half-opening angle.
struct Cone {
    double axis_tilt = 0.0;
    double half_opening = 0.0;
};

struct ConePair {
    Cone ordinary;
    Cone extraordinary;
    Cone ordinary_external;
    Cone extraordinary_external;
};

/// o and e emission cones of one crystal, from the pairs phase matched in the
/// principal (x-z) plane; external cones include exit-face refraction.
ConePair phase_match_cones(const CrystalSpec& crystal, const PumpSpec& pump);

/// Number of common directions of two cones (0, 1 for tangency, or 2),
/// treating them as circles on the small-angle direction plane.
int cone_intersections(const Cone& a, const Cone& b, double tolerance = 1e-9);

/// Snell refraction at a face normal to z conserves n sin(polar). Returns the
/// internal polar angle for that invariant; e-waves are solved
/// self-consistently because their index depends on the internal direction.
double internal_polar_angle(const CrystalSpec& crystal, double wavelength_nm,
                            Polarization polarization, double transverse_invariant,
                            double azimuth);

/// thickness / cos(internal polar). Throws GeometryError for grazing rays.
double slab_path_length(const CrystalSpec& crystal, double internal_polar);

/// Path length inside the slab for a ray arriving from vacuum along
/// `external_direction` (z component must be positive).
double internal_path_length(const CrystalSpec& crystal, const Vec3& external_direction,
                            Polarization polarization, double wavelength_nm);

/// Per-class values for photons 1e, 1o, 2e, 2o (crystal, polarization).
struct ClassTimes {
    double e1 = 0.0;
    double o1 = 0.0;
    double e2 = 0.0;
    double o2 = 0.0;
};

/// Beam pairing: (1e, 2o) share one beam and (1o, 2e) the other.
double pairing_mismatch(const ClassTimes& t);

/// Average emission times [fs] at the exit face, referenced to the pump
/// pulse centre entering the first crystal, when every photon leaves along
/// `external_direction`. Generation is taken at each crystal's centre.
ClassTimes emission_times_along(const Cascade& cascade, const PumpSpec& pump,
                                const Vec3& external_direction, const ClassTimes& delays = {});

/// Average emission times with each class on its own phase-matched cone at
/// azimuth `phi`.
ClassTimes emission_times_at(const Cascade& cascade, const PumpSpec& pump, double phi,
                             const ClassTimes& delays = {});

inline constexpr std::size_t kDefaultPhiPoints = 256;

/// n uniform points on [0, 2 pi).
std::vector<double> uniform_phi_grid(std::size_t n = kDefaultPhiPoints);

struct EmissionTimeMap {
    std::vector<double> phi;
    std::vector<ClassTimes> times; // delays already added
    ClassTimes applied_delays;
};

/// Delays must be non-negative; the grid strictly increasing on [0, 2 pi).
EmissionTimeMap emission_time_map(const Cascade& cascade, const PumpSpec& pump,
                                  const ClassTimes& delays, std::span<const double> phi_grid);

/// Flatness tolerance on the pairing mismatch of a balanced map [fs].
inline constexpr double kFlatnessToleranceFs = 5.0;

/// max over phi of max(|t_1e - t_2o|, |t_1o - t_2e|). Needs >= 64 points.
double pairing_mismatch(const EmissionTimeMap& map);

/// Constant per-class delays (one non-zero entry per beam) that minimise
/// the map's pairing mismatch. Computed from the undelayed times.
ClassTimes balancing_delays(const EmissionTimeMap& map);

} // namespace spdc
