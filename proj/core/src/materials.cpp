#include "spdc/materials.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

double term_value(const SellmeierTerm& t, double lambda_um) {
    const double x = lambda_um * lambda_um;
    switch (t.kind) {
    case SellmeierTerm::Kind::Resonance:
        return t.strength * x / (x - t.parameter);
    case SellmeierTerm::Kind::Pole:
        return t.strength / (x - t.parameter);
    case SellmeierTerm::Kind::Power:
        return t.strength * std::pow(lambda_um, t.parameter);
    }
    return 0.0;
}

double term_slope(const SellmeierTerm& t, double lambda_um) {
    const double x = lambda_um * lambda_um;
    const double dx = 2.0 * lambda_um;
    switch (t.kind) {
    case SellmeierTerm::Kind::Resonance: {
        const double d = x - t.parameter;
        return -t.strength * t.parameter / (d * d) * dx;
    }
    case SellmeierTerm::Kind::Pole: {
        const double d = x - t.parameter;
        return -t.strength / (d * d) * dx;
    }
    case SellmeierTerm::Kind::Power:
        if (t.parameter == 0.0) return 0.0;
        return t.parameter * t.strength * std::pow(lambda_um, t.parameter - 1.0);
    }
    return 0.0;
}

std::string format_range_message(const DispersionModel& model, double wavelength_nm,
                                 const char* requirement) {
    std::ostringstream os;
    os << "wavelength " << wavelength_nm << " nm is not " << requirement << " the valid range ["
       << model.valid_range.min_nm << ", " << model.valid_range.max_nm << "] nm of "
       << model.name;
    return os.str();
}

void require_in_range(const DispersionModel& model, double wavelength_nm) {
    if (!model.valid_range.contains(wavelength_nm))
        throw RangeError(format_range_message(model, wavelength_nm, "within"),
                         model.valid_range.min_nm, model.valid_range.max_nm);
}

void require_interior(const DispersionModel& model, double wavelength_nm) {
    if (!model.valid_range.interior(wavelength_nm))
        throw RangeError(format_range_message(model, wavelength_nm, "strictly inside"),
                         model.valid_range.min_nm, model.valid_range.max_nm);
}

void require_angle(double theta) {
    constexpr double slack = 1e-12;
    if (!(theta >= -slack && theta <= kPi / 2 + slack)) {
        std::ostringstream os;
        os << "propagation angle " << theta << " rad outside [0, pi/2]";
        throw ArgumentError(os.str());
    }
}

struct IndexAndSlope {
    double n;
    double dn_dlambda_um;
};

IndexAndSlope ordinary_with_slope(const DispersionModel& m, double lambda_um) {
    const double n = std::sqrt(m.ordinary.index_squared(lambda_um));
    return {n, m.ordinary.index_squared_slope(lambda_um) / (2.0 * n)};
}

IndexAndSlope extraordinary_with_slope(const DispersionModel& m, double lambda_um,
                                       double theta) {
    const double so = m.ordinary.index_squared(lambda_um);
    const double se = m.extraordinary.index_squared(lambda_um);
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double inv = c2 / so + s2 / se;
    const double dinv = -c2 * m.ordinary.index_squared_slope(lambda_um) / (so * so)
                        - s2 * m.extraordinary.index_squared_slope(lambda_um) / (se * se);
    const double n = 1.0 / std::sqrt(inv);
    return {n, -0.5 * n * n * n * dinv};
}

DispersionModel make_bbo() {
    using K = SellmeierTerm::Kind;
    DispersionModel m;
    m.name = "BBO";
    m.ordinary = SellmeierSeries(2.7359, {{K::Pole, 0.01878, 0.01822}, {K::Power, -0.01354, 2.0}});
    m.extraordinary =
        SellmeierSeries(2.3753, {{K::Pole, 0.01224, 0.01667}, {K::Power, -0.01516, 2.0}});
    m.valid_range = {220.0, 1060.0};
    return m;
}

DispersionModel make_quartz() {
    using K = SellmeierTerm::Kind;
    DispersionModel m;
    m.name = "quartz";
    m.ordinary = SellmeierSeries(1.28604141, {{K::Resonance, 1.07044083, 1.00585997e-2},
                                              {K::Resonance, 1.10202242, 100.0}});
    m.extraordinary = SellmeierSeries(1.28851804, {{K::Resonance, 1.09509924, 1.02101864e-2},
                                                   {K::Resonance, 1.15662475, 100.0}});
    m.valid_range = {198.0, 2053.1};
    return m;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view text, std::string_view where) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ConfigError(std::string(where) + ": expected a number, got '" + t + "'");
    return value;
}

// "B1 C1, B2 C2" -> terms of one kind.
void parse_terms(std::string_view list, SellmeierTerm::Kind kind, std::string_view where,
                 std::vector<SellmeierTerm>& out) {
    std::string item;
    std::istringstream items{std::string(list)};
    while (std::getline(items, item, ',')) {
        std::istringstream fields(item);
        std::string a, b, extra;
        if (!(fields >> a >> b) || (fields >> extra))
            throw ConfigError(std::string(where) + ": each term needs exactly two numbers");
        out.push_back({kind, parse_number(a, where), parse_number(b, where)});
    }
}

SellmeierSeries parse_series(const boost::property_tree::ptree& section, std::string_view source,
                             std::string_view name) {
    const std::string where = std::string(source) + " [" + std::string(name) + "]";
    double constant = 1.0;
    bool have_constant = false;
    std::vector<SellmeierTerm> terms;
    for (const auto& [key, node] : section) {
        const std::string value = node.get_value<std::string>();
        const std::string field = where + " " + key;
        if (key == "constant") {
            constant = parse_number(value, field);
            have_constant = true;
        } else if (key == "resonance") {
            parse_terms(value, SellmeierTerm::Kind::Resonance, field, terms);
        } else if (key == "pole") {
            parse_terms(value, SellmeierTerm::Kind::Pole, field, terms);
        } else if (key == "power") {
            parse_terms(value, SellmeierTerm::Kind::Power, field, terms);
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    if (!have_constant) throw ConfigError(where + ": missing 'constant'");
    return {constant, std::move(terms)};
}

} // namespace

double SellmeierSeries::index_squared(double wavelength_um) const {
    double sum = constant_;
    for (const auto& t : terms_) sum += term_value(t, wavelength_um);
    return sum;
}

double SellmeierSeries::index_squared_slope(double wavelength_um) const {
    double sum = 0.0;
    for (const auto& t : terms_) sum += term_slope(t, wavelength_um);
    return sum;
}

DispersionModel DispersionModel::constant(std::string name, double n_o, double n_e,
                                          WavelengthRange range) {
    return {std::move(name), SellmeierSeries(n_o * n_o, {}), SellmeierSeries(n_e * n_e, {}),
            range};
}

const DispersionModel& bbo() {
    static const DispersionModel model = make_bbo();
    return model;
}

const DispersionModel& crystal_quartz() {
    static const DispersionModel model = make_quartz();
    return model;
}

DispersionModel builtin_material(std::string_view name) {
    const std::string key = lowercase(trim(name));
    if (key == "bbo") return bbo();
    if (key == "quartz") return crystal_quartz();
    throw ConfigError("unknown built-in material '" + std::string(name) +
                      "' (known: BBO, quartz)");
}

DispersionModel parse_dispersion_model(std::istream& in, std::string_view source) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string(source) + ": " + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
    }

    DispersionModel model;
    bool have_material = false, have_o = false, have_e = false;
    for (const auto& [section, node] : tree) {
        if (section == "material") {
            have_material = true;
            bool have_min = false, have_max = false;
            for (const auto& [key, value_node] : node) {
                const std::string value = value_node.get_value<std::string>();
                const std::string field = std::string(source) + " [material] " + key;
                if (key == "name") {
                    model.name = trim(value);
                } else if (key == "valid_min_nm") {
                    model.valid_range.min_nm = parse_number(value, field);
                    have_min = true;
                } else if (key == "valid_max_nm") {
                    model.valid_range.max_nm = parse_number(value, field);
                    have_max = true;
                } else if (key == "source") {
                    // provenance note, not used
                } else {
                    throw ConfigError(std::string(source) + ": unknown key '" + key +
                                      "' in [material]");
                }
            }
            if (model.name.empty() || !have_min || !have_max)
                throw ConfigError(std::string(source) +
                                  ": [material] needs name, valid_min_nm and valid_max_nm");
        } else if (section == "ordinary") {
            model.ordinary = parse_series(node, source, section);
            have_o = true;
        } else if (section == "extraordinary") {
            model.extraordinary = parse_series(node, source, section);
            have_e = true;
        } else {
            throw ConfigError(std::string(source) + ": unknown section [" + section + "]");
        }
    }
    if (!have_material || !have_o || !have_e)
        throw ConfigError(std::string(source) +
                          ": needs [material], [ordinary] and [extraordinary] sections");
    if (!(model.valid_range.min_nm > 0.0 && model.valid_range.max_nm > model.valid_range.min_nm))
        throw ConfigError(std::string(source) + ": empty or negative valid range");
    check_dispersion_model(model);
    return model;
}

DispersionModel load_dispersion_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open material file " + path.string());
    return parse_dispersion_model(in, path.string());
}

void check_dispersion_model(const DispersionModel& model) {
    constexpr int samples = 257;
    const auto [lo, hi] = model.valid_range;
    for (int i = 0; i < samples; ++i) {
        const double lambda_um = (lo + (hi - lo) * i / (samples - 1)) / 1000.0;
        const double so = model.ordinary.index_squared(lambda_um);
        const double se = model.extraordinary.index_squared(lambda_um);
        if (!(so > 1.0 && se > 1.0 && std::isfinite(so) && std::isfinite(se))) {
            std::ostringstream os;
            os << model.name << ": refractive index not above 1 at " << lambda_um * 1000.0
               << " nm";
            throw ConfigError(os.str());
        }
    }
}

double index_ordinary(const DispersionModel& model, double wavelength_nm) {
    require_in_range(model, wavelength_nm);
    return std::sqrt(model.ordinary.index_squared(wavelength_nm / 1000.0));
}

double index_principal_extraordinary(const DispersionModel& model, double wavelength_nm) {
    require_in_range(model, wavelength_nm);
    return std::sqrt(model.extraordinary.index_squared(wavelength_nm / 1000.0));
}

double index_extraordinary(const DispersionModel& model, double wavelength_nm, double theta) {
    require_in_range(model, wavelength_nm);
    require_angle(theta);
    return extraordinary_with_slope(model, wavelength_nm / 1000.0, theta).n;
}

double phase_index(const DispersionModel& model, double wavelength_nm, const Wave& wave) {
    return wave.polarization == Polarization::Ordinary
               ? index_ordinary(model, wavelength_nm)
               : index_extraordinary(model, wavelength_nm, wave.theta);
}

double group_index(const DispersionModel& model, double wavelength_nm, const Wave& wave) {
    require_interior(model, wavelength_nm);
    const double lambda_um = wavelength_nm / 1000.0;
    IndexAndSlope v;
    if (wave.polarization == Polarization::Ordinary) {
        v = ordinary_with_slope(model, lambda_um);
    } else {
        require_angle(wave.theta);
        v = extraordinary_with_slope(model, lambda_um, wave.theta);
    }
    return v.n - lambda_um * v.dn_dlambda_um;
}

Vec3 CrystalSpec::optic_axis() const {
    return {axis_sign * std::sin(cut_angle), 0.0, std::cos(cut_angle)};
}

void validate(const CrystalSpec& crystal) {
    if (!(crystal.thickness_mm >= 0.0) || !std::isfinite(crystal.thickness_mm))
        throw ArgumentError("crystal thickness must be a finite non-negative length");
    if (!(crystal.cut_angle > 0.0 && crystal.cut_angle < kPi / 2))
        throw ArgumentError("cut angle must lie strictly between 0 and pi/2");
    if (crystal.axis_sign != 1 && crystal.axis_sign != -1)
        throw ArgumentError("axis_sign must be +1 or -1");
}

double PumpSpec::center_frequency() const { return angular_frequency(center_nm); }

double PumpSpec::sigma() const {
    const double fwhm_omega =
        2.0 * kPi * kSpeedOfLight * bandwidth_fwhm_nm / (center_nm * center_nm);
    return fwhm_omega / std::sqrt(2.0 * std::log(2.0));
}

void validate(const PumpSpec& pump) {
    if (!(pump.center_nm > 0.0) || !std::isfinite(pump.center_nm))
        throw ArgumentError("pump centre wavelength must be positive");
    if (!(pump.bandwidth_fwhm_nm > 0.0) || !std::isfinite(pump.bandwidth_fwhm_nm))
        throw ArgumentError("pump bandwidth must be positive");
}

PropagationTimes propagation_times(const CrystalSpec& crystal, const PumpSpec& pump,
                                   double e_angle, double e_angle_second) {
    validate(crystal);
    validate(pump);
    const auto& m = crystal.model;
    const double lambda_dc = pump.degenerate_wavelength();
    const double length = crystal.thickness_mm;
    return {
        transit_time_fs(length,
                        group_index(m, pump.center_nm, Wave::extraordinary(crystal.cut_angle))),
        transit_time_fs(length, group_index(m, lambda_dc, Wave::ordinary())),
        transit_time_fs(length, group_index(m, lambda_dc, Wave::extraordinary(e_angle))),
        transit_time_fs(length, group_index(m, lambda_dc, Wave::extraordinary(e_angle_second))),
    };
}

PropagationTimes axial_propagation_times(const CrystalSpec& crystal, const PumpSpec& pump) {
    return propagation_times(crystal, pump, crystal.cut_angle, crystal.cut_angle);
}

} // namespace spdc
