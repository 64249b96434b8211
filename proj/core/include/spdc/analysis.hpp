#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spdc/delays.hpp"
#include "spdc/interference.hpp"
#include "spdc/materials.hpp"

namespace spdc {

enum class AbscissaKind { DelayFs, QuartzMm, AnalyzerRad };

/// CSV column name including units, e.g. "tau_B_fs".
std::string_view abscissa_label(AbscissaKind kind);

struct ScanPoint {
    double x = 0.0;
    double value = 0.0;
};

/// Ordered samples of a scan. `ordinate` is "rate" for coincidence scans and
/// "visibility" for visibility curves.
struct ScanSeries {
    AbscissaKind kind = AbscissaKind::DelayFs;
    std::string ordinate = "rate";
    std::vector<ScanPoint> points;
    double fringe_period_fs = 0.0; // set on delay scans
    std::vector<std::pair<std::string, double>> snapshot;
};

/// x strictly increasing, at least two points, values non-negative.
void validate(const ScanSeries& series);

/// Inclusive arithmetic sweep start, start + step, ... <= stop.
struct Sweep {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
};

std::vector<double> sweep_points(const Sweep& sweep);

struct SearchBox {
    double tau_a_min = 0.0;
    double tau_a_max = 0.0;
    double tau_b_min = 0.0;
    double tau_b_max = 0.0;
};

struct NumericOptimum {
    DelayPair delays;
    double envelope = 0.0;
    bool on_boundary = false; // maximizer within 0.01 fs of the box edge
};

/// Maximizes the envelope inside the Rect window over the box: 1 fs grid,
/// then line searches along the tau axes and the tau_A +- tau_B diagonals.
NumericOptimum optimize_delays_numeric(const InterferenceParams& params, const SearchBox& box);

/// Coincidence rate versus tau_B with everything else taken from `base`.
/// The step must not exceed fringe_period / 8.
ScanSeries delay_scan(const InterferenceParams& params, const AnalyzerDelayConfig& base,
                      const Sweep& tau_b);

/// Coincidence rate versus theta_B. The step must not exceed pi / 64.
ScanSeries polarization_scan(const InterferenceParams& params, double tau_a, double tau_b,
                             double theta_a, const Sweep& theta_b,
                             Coherence coherence = Coherence::Coherent);

/// (max - min) / (max + min), with each extremum refined by a parabola
/// through the three samples around it. Delay scans must span two fringe
/// periods, analyzer scans pi.
double extract_visibility(const ScanSeries& series);

/// Mean spacing of successive fringe maxima (parabola-refined).
double measure_fringe_period(const ScanSeries& series);

/// Default delay-scan sampling: period / 32.
inline constexpr int kSamplesPerFringe = 32;

/// Local fringe visibility at every tau_B of the grid, analyzers at pi/4 and
/// tau_A fixed.
ScanSeries visibility_curve(const InterferenceParams& params, double tau_a, const Sweep& tau_b);

/// tau_B closest to `tau_b` at which the fringe term cos[w (tA - tB) + phi0]
/// is +-1.
double fringe_locked_tau_b(const InterferenceParams& params, double tau_a, double tau_b);

/// Group delay [fs] between o and e waves crossing a plate cut with its optic
/// axis in the face: thickness * |n_g,o - n_g,e| / c.
double quartz_delay(const DispersionModel& plate, double wavelength_nm, double thickness_mm);

/// Inverse of quartz_delay [mm].
double quartz_thickness(const DispersionModel& plate, double wavelength_nm, double delay_fs);

struct DelayPrescription {
    double tau_a = 0.0;
    double tau_b = 0.0;
    double plate_a_mm = 0.0;
    double plate_b_mm = 0.0;
};

/// Plate thicknesses realizing |tau_A| and |tau_B|.
DelayPrescription prescribe_delays(const DelayPair& delays, const DispersionModel& plate,
                                   double wavelength_nm);

} // namespace spdc
