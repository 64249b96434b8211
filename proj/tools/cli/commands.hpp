#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/run_config.hpp"

namespace spdc::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumeric = 3,
    kExitIo = 4,
};

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Each command computes everything before touching the output file. The
// returned string is the summary printed on stdout.

/// CSV table wavelength_nm,n_o,n_e,n_g_o,n_g_e (n_e and n_g_e principal).
std::string cmd_indices(const RunConfig& config, const std::vector<double>& wavelengths_nm);
std::string cmd_emission_map(const RunConfig& config, const std::filesystem::path& out);
std::string cmd_scan(const RunConfig& config, const std::filesystem::path& out);
std::string cmd_visibility_curve(const RunConfig& config, const std::filesystem::path& out);
std::string cmd_polarization(const RunConfig& config, const std::filesystem::path& out);
std::string cmd_optimize(const RunConfig& config);

} // namespace spdc::cli
