#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "spdc/analysis.hpp"
#include "spdc/geometry.hpp"

namespace spdc {

/// Columns phi_deg, t_1e_fs, t_1o_fs, t_2e_fs, t_2o_fs; 6 significant digits.
void write_emission_map_csv(std::ostream& out, const EmissionTimeMap& map);

/// Header "<abscissa label>,<ordinate>" then x,value rows; 6 significant digits.
void write_scan_csv(std::ostream& out, const ScanSeries& series);

struct VisibilitySummary {
    double visibility = 0.0;
    std::optional<double> fringe_period_fs; // null when no fringes were found
    double tau_a_fs = 0.0;
    double tau_b_fs = 0.0;
};

/// One-line JSON record with keys visibility, fringe_period_fs, tau_A_fs, tau_B_fs.
std::string summary_json(const VisibilitySummary& summary);

/// Writes through `fill` into a sibling temporary file and renames it over
/// `path` on success, so a failed write never leaves a partial file.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& fill);

} // namespace spdc
