#include "cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "spdc/errors.hpp"

namespace spdc::cli {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double to_number(const std::string& text, const std::string& field) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(field + ": expected a number, got '" + t + "'");
    return v;
}

bool to_bool(const std::string& text, const std::string& field) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw ConfigError(field + ": expected true or false, got '" + t + "'");
}

std::vector<double> to_list(const std::string& text, const std::string& field) {
    std::vector<double> out;
    std::istringstream items(text);
    std::string item;
    while (std::getline(items, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(to_number(item, field));
    }
    return out;
}

DispersionModel material_from(const std::string& value, const std::filesystem::path& base_dir) {
    const std::string v = trim(value);
    if (v.ends_with(".ini")) {
        std::filesystem::path p(v);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        return load_dispersion_model(p);
    }
    return builtin_material(v);
}

using Setter = std::function<void(RunConfig&, const std::string& value, const std::string& field)>;
using SectionTable = std::map<std::string, Setter, std::less<>>;

std::map<std::string, SectionTable, std::less<>> make_table(const std::filesystem::path& base) {
    auto num = [](double RunConfig::*member) -> Setter {
        return [member](RunConfig& c, const std::string& v, const std::string& f) {
            c.*member = to_number(v, f);
        };
    };
    auto deg = [](double RunConfig::*member) -> Setter {
        return [member](RunConfig& c, const std::string& v, const std::string& f) {
            c.*member = deg_to_rad(to_number(v, f));
        };
    };
    auto opt = [](std::optional<double> RunConfig::*member) -> Setter {
        return [member](RunConfig& c, const std::string& v, const std::string& f) {
            c.*member = to_number(v, f);
        };
    };
    auto opt_deg = [](std::optional<double> RunConfig::*member) -> Setter {
        return [member](RunConfig& c, const std::string& v, const std::string& f) {
            c.*member = deg_to_rad(to_number(v, f));
        };
    };
    auto flag = [](bool RunConfig::*member) -> Setter {
        return [member](RunConfig& c, const std::string& v, const std::string& f) {
            c.*member = to_bool(v, f);
        };
    };
    auto delay = [](double ClassTimes::*member) -> Setter {
        return [member](RunConfig& c, const std::string& v, const std::string& f) {
            if (!c.class_delays) c.class_delays = ClassTimes{};
            (*c.class_delays).*member = to_number(v, f);
        };
    };

    std::map<std::string, SectionTable, std::less<>> t;
    t["crystal"] = {
        {"material", [base](RunConfig& c, const std::string& v, const std::string&) {
             c.material = material_from(v, base);
         }},
        {"thickness_mm", num(&RunConfig::thickness_mm)},
        {"second_thickness_mm", opt(&RunConfig::second_thickness_mm)},
        {"cut_angle_deg", deg(&RunConfig::cut_angle)},
        {"cascade", flag(&RunConfig::cascade)},
    };
    t["pump"] = {
        {"center_nm", num(&RunConfig::center_nm)},
        {"bandwidth_nm", num(&RunConfig::bandwidth_nm)},
        {"sigma_scale", num(&RunConfig::sigma_scale)},
    };
    t["interference"] = {
        {"phi0_rad", num(&RunConfig::phase0)},
        {"theta_a_deg", deg(&RunConfig::theta_a)},
        {"theta_b_deg", deg(&RunConfig::theta_b)},
        {"tau_a_fs", opt(&RunConfig::tau_a_fs)},
        {"tau_b_fs", opt(&RunConfig::tau_b_fs)},
        {"beam_a_phi_deg", opt_deg(&RunConfig::beam_a_phi)},
        {"beam_b_phi_deg", opt_deg(&RunConfig::beam_b_phi)},
    };
    t["delay_plate"] = {
        {"material", [base](RunConfig& c, const std::string& v, const std::string&) {
             c.plate = material_from(v, base);
         }},
    };
    t["emission_map"] = {
        {"phi_points",
         [](RunConfig& c, const std::string& v, const std::string& f) {
             const double n = to_number(v, f);
             if (n < 1 || n != std::floor(n)) throw ConfigError(f + ": expected a positive integer");
             c.phi_points = static_cast<std::size_t>(n);
         }},
        {"e1_fs", delay(&ClassTimes::e1)},
        {"o1_fs", delay(&ClassTimes::o1)},
        {"e2_fs", delay(&ClassTimes::e2)},
        {"o2_fs", delay(&ClassTimes::o2)},
    };
    t["scan"] = {
        {"half_width_fs", num(&RunConfig::scan_half_width_fs)},
        {"step_fs", opt(&RunConfig::scan_step_fs)},
    };
    t["visibility_curve"] = {
        {"half_width_fs", num(&RunConfig::curve_half_width_fs)},
        {"step_fs", num(&RunConfig::curve_step_fs)},
        {"tau_b_min_fs", opt(&RunConfig::curve_min_fs)},
        {"tau_b_max_fs", opt(&RunConfig::curve_max_fs)},
    };
    t["polarization"] = {
        {"theta_a_deg", deg(&RunConfig::pol_theta_a)},
        {"theta_b_min_deg", deg(&RunConfig::pol_theta_b_min)},
        {"theta_b_max_deg", deg(&RunConfig::pol_theta_b_max)},
        {"theta_b_step_deg", deg(&RunConfig::pol_theta_b_step)},
        {"lock_fringe", flag(&RunConfig::lock_fringe)},
    };
    t["indices"] = {
        {"wavelengths_nm", [](RunConfig& c, const std::string& v, const std::string& f) {
             c.wavelengths_nm = to_list(v, f);
         }},
    };
    return t;
}

// Rethrows library argument errors as configuration errors.
template <class F>
void check(F&& f, const char* context) {
    try {
        f();
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string(context) + ": " + e.what());
    } catch (const RangeError& e) {
        throw ConfigError(std::string(context) + ": " + e.what());
    }
}

} // namespace

Cascade RunConfig::cascade_pair() const {
    return make_cascade(material, thickness_mm, second_thickness_mm.value_or(thickness_mm),
                        cut_angle);
}

PropagationTimes RunConfig::times() const { return axial_propagation_times(crystal(), pump()); }

InterferenceParams RunConfig::interference() const {
    InterferenceParams p = InterferenceParams::from(times(), pump(), phase0);
    p.sigma *= sigma_scale;
    return p;
}

RunConfig parse_run_config(std::istream& in, std::string_view source,
                           const std::filesystem::path& base_dir) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string(source) + ": " + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
    }

    const auto table = make_table(base_dir);
    RunConfig config;
    for (const auto& [section, node] : tree) {
        const auto s = table.find(section);
        if (s == table.end() || !node.data().empty())
            throw ConfigError(std::string(source) + ": unknown section or top-level key '" +
                              section + "'");
        for (const auto& [key, value] : node) {
            const auto k = s->second.find(key);
            if (k == s->second.end())
                throw ConfigError(std::string(source) + ": unknown key '" + key + "' in [" +
                                  section + "]");
            k->second(config, value.get_value<std::string>(),
                       std::string(source) + " [" + section + "] " + key);
        }
    }
    validate(config);
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_run_config(in, path.string(), path.parent_path());
}

void validate(const RunConfig& c) {
    check([&] { validate(c.crystal()); }, "crystal");
    if (c.second_thickness_mm) check([&] { validate(c.cascade_pair()); }, "crystal");
    check([&] { validate(c.pump()); }, "pump");
    if (!(c.sigma_scale > 0.0)) throw ConfigError("pump: sigma_scale must be positive");
    check(
        [&] {
            // Group indices need both wavelengths strictly inside the model.
            group_index(c.material, c.center_nm, Wave::ordinary());
            group_index(c.material, c.pump().degenerate_wavelength(), Wave::ordinary());
            group_index(c.plate, c.pump().degenerate_wavelength(), Wave::ordinary());
        },
        "wavelength");
    if (c.phi_points < 64) throw ConfigError("emission_map: phi_points must be at least 64");
    if (c.class_delays) {
        const auto& d = *c.class_delays;
        if (d.e1 < 0 || d.o1 < 0 || d.e2 < 0 || d.o2 < 0)
            throw ConfigError("emission_map: delays must be non-negative");
    }
    if (!(c.scan_half_width_fs > 0.0)) throw ConfigError("scan: half_width_fs must be positive");
    if (c.scan_step_fs && !(*c.scan_step_fs > 0.0))
        throw ConfigError("scan: step_fs must be positive");
    if (!(c.curve_half_width_fs > 0.0) || !(c.curve_step_fs > 0.0))
        throw ConfigError("visibility_curve: half width and step must be positive");
    if (c.curve_min_fs && c.curve_max_fs && !(*c.curve_max_fs > *c.curve_min_fs))
        throw ConfigError("visibility_curve: tau_b_max_fs must exceed tau_b_min_fs");
    if (!(c.pol_theta_b_max > c.pol_theta_b_min))
        throw ConfigError("polarization: theta_b_max_deg must exceed theta_b_min_deg");
    if (!(c.pol_theta_b_step > 0.0) || c.pol_theta_b_step > kPi / 64.0 * (1.0 + 1e-12))
        throw ConfigError("polarization: theta_b_step_deg must be positive and at most 180/64");
    for (double w : c.wavelengths_nm)
        if (!(w > 0.0)) throw ConfigError("indices: wavelengths must be positive");
}

} // namespace spdc::cli
