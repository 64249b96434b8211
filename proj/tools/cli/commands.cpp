#include "cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spdc/analysis.hpp"
#include "spdc/errors.hpp"
#include "spdc/io.hpp"

namespace spdc::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Keeps summaries at the CSV precision so they are stable across platforms.
double rounded(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v == 0.0 ? 0.0 : v;
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return std::stod(os.str());
}

Json class_json(const ClassTimes& t) {
    return Json{{"e1", rounded(t.e1)}, {"o1", rounded(t.o1)}, {"e2", rounded(t.e2)},
                {"o2", rounded(t.o2)}};
}

DelayPair chosen_delays(const RunConfig& config) {
    const DelayPair opt = optimal_delays(config.times());
    return {config.tau_a_fs.value_or(opt.tau_a), config.tau_b_fs.value_or(opt.tau_b)};
}

std::filesystem::path require_out(const std::filesystem::path& out, const char* command) {
    if (out.empty()) throw ConfigError(std::string(command) + " needs --out <path>");
    return out;
}

Json beam_json(const Cascade& cascade, const PumpSpec& pump, double phi, const ClassTimes& delays,
               bool first_e) {
    const ClassTimes t = emission_times_at(cascade, pump, phi, delays);
    const double a = first_e ? t.e1 : t.o1;
    const double b = first_e ? t.o2 : t.e2;
    return Json{{"phi_deg", rounded(rad_to_deg(phi))},
                {first_e ? "t_1e_fs" : "t_1o_fs", rounded(a)},
                {first_e ? "t_2o_fs" : "t_2e_fs", rounded(b)},
                {"mismatch_fs", rounded(std::fabs(a - b))}};
}

RunConfig resolve_config(const std::string& path) {
    if (!path.empty()) return load_run_config(path);
    if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0')
        return load_run_config(env);
    RunConfig defaults;
    validate(defaults);
    return defaults;
}

} // namespace

std::string cmd_indices(const RunConfig& config, const std::vector<double>& wavelengths_nm) {
    if (wavelengths_nm.empty())
        throw ConfigError("usage: indices needs at least one wavelength (-l or [indices])");
    std::ostringstream os;
    os << "wavelength_nm,n_o,n_e,n_g_o,n_g_e\n" << std::setprecision(8);
    const Wave e_principal = Wave::extraordinary(kPi / 2);
    for (double w : wavelengths_nm) {
        os << w << ',' << index_ordinary(config.material, w) << ','
           << index_principal_extraordinary(config.material, w) << ','
           << group_index(config.material, w, Wave::ordinary()) << ','
           << group_index(config.material, w, e_principal) << '\n';
    }
    return os.str();
}

std::string cmd_emission_map(const RunConfig& config, const std::filesystem::path& out) {
    if (!config.cascade) throw ConfigError("emission map requires cascade");
    require_out(out, "emission-map");
    const Cascade cascade = config.cascade_pair();
    const PumpSpec pump = config.pump();
    const auto grid = uniform_phi_grid(config.phi_points);

    ClassTimes delays;
    bool balanced = false;
    if (config.class_delays) {
        delays = *config.class_delays;
    } else {
        delays = balancing_delays(emission_time_map(cascade, pump, {}, grid));
        balanced = true;
    }
    const EmissionTimeMap map = emission_time_map(cascade, pump, delays, grid);

    Json summary{{"pairing_mismatch_fs", rounded(pairing_mismatch(map))},
                 {"flat", pairing_mismatch(map) < kFlatnessToleranceFs},
                 {"delays_fs", class_json(delays)},
                 {"balancing_delays", balanced},
                 {"phi_points", config.phi_points}};
    if (config.beam_a_phi) summary["beam_a"] = beam_json(cascade, pump, *config.beam_a_phi, delays, true);
    if (config.beam_b_phi)
        summary["beam_b"] = beam_json(cascade, pump, *config.beam_b_phi, delays, false);

    write_file_atomically(out, [&](std::ostream& os) { write_emission_map_csv(os, map); });
    return summary.dump() + "\n";
}

std::string cmd_scan(const RunConfig& config, const std::filesystem::path& out) {
    require_out(out, "scan");
    const InterferenceParams params = config.interference();
    const DelayPair opt = optimal_delays(params.times);
    const double tau_a = config.tau_a_fs.value_or(opt.tau_a);
    const double centre = config.tau_b_fs.value_or(opt.tau_b);
    const double step = config.scan_step_fs.value_or(fringe_period(params) / kSamplesPerFringe);

    const ScanSeries series =
        delay_scan(params, {config.theta_a, config.theta_b, tau_a, centre},
                   {centre - config.scan_half_width_fs, centre + config.scan_half_width_fs, step});
    VisibilitySummary summary{extract_visibility(series), std::nullopt, tau_a, centre};
    try {
        summary.fringe_period_fs = measure_fringe_period(series);
    } catch (const ArgumentError&) {
        // flat series: no fringes to measure
    }
    summary.visibility = rounded(summary.visibility);
    if (summary.fringe_period_fs) summary.fringe_period_fs = rounded(*summary.fringe_period_fs);
    summary.tau_a_fs = rounded(tau_a);
    summary.tau_b_fs = rounded(centre);

    write_file_atomically(out, [&](std::ostream& os) { write_scan_csv(os, series); });
    return summary_json(summary) + "\n";
}

std::string cmd_visibility_curve(const RunConfig& config, const std::filesystem::path& out) {
    require_out(out, "visibility-curve");
    const InterferenceParams params = config.interference();
    const DelayPair opt = optimal_delays(params.times);
    const double tau_a = config.tau_a_fs.value_or(opt.tau_a);
    const double lo = config.curve_min_fs.value_or(opt.tau_b - config.curve_half_width_fs);
    const double hi = config.curve_max_fs.value_or(opt.tau_b + config.curve_half_width_fs);

    const ScanSeries curve = visibility_curve(params, tau_a, {lo, hi, config.curve_step_fs});
    const ScanPoint* peak = &curve.points.front();
    for (const auto& p : curve.points)
        if (p.value > peak->value) peak = &p;

    Json summary{{"peak_visibility", rounded(peak->value)},
                 {"peak_tau_B_fs", rounded(peak->x)},
                 {"closed_form_tau_B_fs", rounded(opt.tau_b)},
                 {"tau_A_fs", rounded(tau_a)}};
    write_file_atomically(out, [&](std::ostream& os) { write_scan_csv(os, curve); });
    return summary.dump() + "\n";
}

std::string cmd_polarization(const RunConfig& config, const std::filesystem::path& out) {
    require_out(out, "polarization");
    const InterferenceParams params = config.interference();
    const DelayPair d = chosen_delays(config);
    const double tau_b = config.lock_fringe ? fringe_locked_tau_b(params, d.tau_a, d.tau_b) : d.tau_b;

    const ScanSeries series =
        polarization_scan(params, d.tau_a, tau_b, config.pol_theta_a,
                          {config.pol_theta_b_min, config.pol_theta_b_max, config.pol_theta_b_step});
    const VisibilitySummary summary{rounded(extract_visibility(series)), std::nullopt,
                                    rounded(d.tau_a), rounded(tau_b)};
    write_file_atomically(out, [&](std::ostream& os) { write_scan_csv(os, series); });
    return summary_json(summary) + "\n";
}

std::string cmd_optimize(const RunConfig& config) {
    const PropagationTimes times = config.times();
    const DelayPair closed = optimal_delays(times);
    const double lambda_dc = config.pump().degenerate_wavelength();
    const DelayPrescription plates = prescribe_delays(closed, config.plate, lambda_dc);

    Json summary{{"tau_A_fs", rounded(closed.tau_a)},
                 {"tau_B_fs", rounded(closed.tau_b)},
                 {"quartz_A_mm", rounded(plates.plate_a_mm)},
                 {"quartz_B_mm", rounded(plates.plate_b_mm)},
                 {"times_fs",
                  Json{{"t_p", rounded(times.pump)},
                       {"t_o", rounded(times.ordinary)},
                       {"t_e", rounded(times.extraordinary)},
                       {"t_e2", rounded(times.extraordinary_second)}}}};

    const InterferenceParams params = config.interference();
    try {
        validate(params);
    } catch (const DegenerateParametersError&) {
        summary["numeric_tau_A_fs"] = nullptr;
        summary["numeric_tau_B_fs"] = nullptr;
        summary["numeric_agrees"] = nullptr;
        summary["max_visibility"] = nullptr;
        return summary.dump() + "\n";
    }
    constexpr double half_box = 200.0;
    const NumericOptimum numeric = optimize_delays_numeric(
        params, {closed.tau_a - half_box, closed.tau_a + half_box, closed.tau_b - half_box,
                 closed.tau_b + half_box});
    const bool agrees = std::fabs(numeric.delays.tau_a - closed.tau_a) <= 0.5 &&
                        std::fabs(numeric.delays.tau_b - closed.tau_b) <= 0.5;
    const TermBalance balance = term_balance(params);
    summary["numeric_tau_A_fs"] = rounded(numeric.delays.tau_a);
    summary["numeric_tau_B_fs"] = rounded(numeric.delays.tau_b);
    summary["numeric_agrees"] = agrees;
    summary["numeric_on_boundary"] = numeric.on_boundary;
    summary["max_visibility"] = rounded(max_visibility(params));
    summary["fringe_period_fs"] = rounded(fringe_period(params));
    summary["interference_to_projection"] = rounded(balance.ratio);
    return summary.dump() + "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cascaded type-II down-conversion source simulator", "spdc-cascade"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::vector<double> wavelengths;
    app.add_option("--config", config_path,
                   std::string("INI run configuration (default: $") + kConfigEnvVar +
                       ", then built-in parameters)");
    app.add_option("--out", out_path, "Output file");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));

    auto* indices = app.add_subcommand("indices", "Refractive and group indices");
    indices->add_option("-l,--wavelengths", wavelengths, "Wavelengths [nm]")->delimiter(',');
    app.add_subcommand("emission-map", "Average emission times around the cones");
    app.add_subcommand("scan", "Coincidence rate versus tau_B");
    app.add_subcommand("visibility-curve", "Local fringe visibility versus tau_B");
    app.add_subcommand("polarization", "Coincidence rate versus analyzer B angle");
    app.add_subcommand("optimize", "Optimal compensator delays and plate thicknesses");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig config = resolve_config(config_path);
        std::string summary;
        if (command == "indices") {
            summary = cmd_indices(config, indices->count("--wavelengths") > 0 ? wavelengths
                                                                             : config.wavelengths_nm);
            if (!out_path.empty()) {
                write_file_atomically(out_path, [&](std::ostream& os) { os << summary; });
                summary.clear();
            }
        } else if (command == "emission-map") {
            summary = cmd_emission_map(config, out_path);
        } else if (command == "scan") {
            summary = cmd_scan(config, out_path);
        } else if (command == "visibility-curve") {
            summary = cmd_visibility_curve(config, out_path);
        } else if (command == "polarization") {
            summary = cmd_polarization(config, out_path);
        } else {
            summary = cmd_optimize(config);
        }
        out << summary;
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "spdc-cascade: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ArgumentError& e) {
        err << "spdc-cascade: argument error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "spdc-cascade: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const RangeError& e) {
        err << "spdc-cascade: range error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "spdc-cascade: numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

} // namespace spdc::cli
