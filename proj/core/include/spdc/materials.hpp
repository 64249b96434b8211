#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/vec3.hpp"

namespace spdc {

/// One additive contribution to n^2(lambda), lambda in micrometres.
///   Resonance: B * lambda^2 / (lambda^2 - C)
///   Pole:      B / (lambda^2 - C)
///   Power:     B * lambda^p
struct SellmeierTerm {
    enum class Kind { Resonance, Pole, Power };

    Kind kind;
    double strength;
    double parameter; // C [um^2] for Resonance/Pole, exponent p for Power
};

/// n^2(lambda) = A + sum of terms.
class SellmeierSeries {
  public:
    SellmeierSeries() = default;
    SellmeierSeries(double constant, std::vector<SellmeierTerm> terms)
        : constant_(constant), terms_(std::move(terms)) {}

    double index_squared(double wavelength_um) const;
    /// d(n^2)/d(lambda) in 1/um, from the closed form of each term.
    double index_squared_slope(double wavelength_um) const;

    double constant() const noexcept { return constant_; }
    const std::vector<SellmeierTerm>& terms() const noexcept { return terms_; }

  private:
    double constant_ = 1.0;
    std::vector<SellmeierTerm> terms_;
};

struct WavelengthRange {
    double min_nm;
    double max_nm;

    bool contains(double wavelength_nm) const {
        return wavelength_nm >= min_nm && wavelength_nm <= max_nm;
    }
    bool interior(double wavelength_nm) const {
        return wavelength_nm > min_nm && wavelength_nm < max_nm;
    }
};

/// Uniaxial crystal dispersion: ordinary and principal extraordinary series.
struct DispersionModel {
    std::string name;
    SellmeierSeries ordinary;
    SellmeierSeries extraordinary;
    WavelengthRange valid_range{0.0, 0.0};

    /// Non-dispersive model with fixed principal indices.
    static DispersionModel constant(std::string name, double n_o, double n_e,
                                    WavelengthRange range = {100.0, 5000.0});
};

/// beta-BaB2O4, Eimerl et al., J. Appl. Phys. 62, 1968 (1987).
const DispersionModel& bbo();
/// Crystalline quartz, Ghosh, Opt. Commun. 163, 95 (1999).
const DispersionModel& crystal_quartz();

/// Built-in model by name ("bbo", "quartz"; case-insensitive).
DispersionModel builtin_material(std::string_view name);

/// Read a material definition in the INI layout of data/materials/*.ini.
DispersionModel parse_dispersion_model(std::istream& in, std::string_view source);
DispersionModel load_dispersion_model(const std::filesystem::path& path);

/// Throws ConfigError unless both indices exceed 1 across the valid range.
void check_dispersion_model(const DispersionModel& model);

enum class Polarization { Ordinary, Extraordinary };

/// Polarization eigenmode plus, for e-waves, the angle between the
/// wavevector and the optic axis.
struct Wave {
    Polarization polarization = Polarization::Ordinary;
    double theta = 0.0;

    static Wave ordinary() { return {Polarization::Ordinary, 0.0}; }
    static Wave extraordinary(double theta) { return {Polarization::Extraordinary, theta}; }
};

double index_ordinary(const DispersionModel& model, double wavelength_nm);
/// Principal extraordinary index n_e(lambda), i.e. theta = pi/2.
double index_principal_extraordinary(const DispersionModel& model, double wavelength_nm);
/// 1/n^2(theta) = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
double index_extraordinary(const DispersionModel& model, double wavelength_nm, double theta);
double phase_index(const DispersionModel& model, double wavelength_nm, const Wave& wave);

/// n_g = n - lambda dn/dlambda at fixed propagation angle. The wavelength
/// must lie strictly inside the valid range.
double group_index(const DispersionModel& model, double wavelength_nm, const Wave& wave);

/// Uniaxial slab. The optic axis lies in the x-z plane at +cut_angle
/// (axis_sign = +1) or -cut_angle (axis_sign = -1) from the pump axis z.
struct CrystalSpec {
    DispersionModel model;
    double thickness_mm = 0.0;
    double cut_angle = 0.0;
    int axis_sign = +1;

    Vec3 optic_axis() const;
};

/// Zero thickness is accepted and denotes an absent slab.
void validate(const CrystalSpec& crystal);

/// Pulsed pump with spectrum I(w) ~ exp[-2 (w - w0)^2 / sigma^2].
struct PumpSpec {
    double center_nm = 0.0;
    double bandwidth_fwhm_nm = 0.0; // intensity FWHM in wavelength

    /// Centre angular frequency [rad/fs].
    double center_frequency() const;
    /// sigma [rad/fs]: FWHM converted to frequency and divided by sqrt(2 ln 2).
    double sigma() const;
    double degenerate_wavelength() const { return 2.0 * center_nm; }
    double degenerate_frequency() const { return 0.5 * center_frequency(); }
};

void validate(const PumpSpec& pump);

/// Single-crystal transit times [fs]: pump (t_p), ordinary (t_o),
/// extraordinary (t_e) and extraordinary through the mirrored crystal (t_e').
struct PropagationTimes {
    double pump = 0.0;
    double ordinary = 0.0;
    double extraordinary = 0.0;
    double extraordinary_second = 0.0;
};

/// `e_angle` is the angle between the e photon's internal wavevector and the
/// generating crystal's optic axis; `e_angle_second` the angle to the second
/// crystal's axis. The pump is an e-wave travelling along z.
PropagationTimes propagation_times(const CrystalSpec& crystal, const PumpSpec& pump,
                                   double e_angle, double e_angle_second);

/// Times for photons travelling along the pump axis, where both e angles
/// equal the cut angle.
PropagationTimes axial_propagation_times(const CrystalSpec& crystal, const PumpSpec& pump);

} // namespace spdc
