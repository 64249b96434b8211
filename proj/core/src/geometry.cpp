#include "spdc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

// Below this cosine a ray is treated as grazing.
constexpr double kGrazingCos = 1e-6;

// Largest internal polar angle searched for a phase-matching root.
constexpr double kMaxPolar = 1.2;

double solve_root(auto&& f, double lo, double hi) {
    std::uintmax_t iterations = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iterations);
    return 0.5 * (a + b);
}

double pump_index(const CrystalSpec& crystal, const PumpSpec& pump) {
    return index_extraordinary(crystal.model, pump.center_nm, crystal.cut_angle);
}

struct PhaseMatchProbe {
    double residual;
    PhaseMatchedPair pair;
};

PhaseMatchProbe probe(const CrystalSpec& crystal, double lambda_dc, double n_o, double n_p,
                      double azimuth, double e_polar) {
    const Vec3 k_e = Vec3::from_angles(e_polar, azimuth);
    const double axis_angle = angle_to_axis(k_e, crystal.optic_axis());
    const double n_e = index_extraordinary(crystal.model, lambda_dc, axis_angle);
    const double s = n_e * std::sin(e_polar) / n_o;
    PhaseMatchProbe out;
    out.pair = {azimuth, e_polar, std::asin(std::min(s, 1.0)), n_e, n_o, axis_angle};
    // Past total transverse mismatch the residual keeps decreasing.
    const double longitudinal = s <= 1.0 ? n_o * std::sqrt(1.0 - s * s) : -n_o * (s - 1.0);
    out.residual = longitudinal + n_e * std::cos(e_polar) - 2.0 * n_p;
    return out;
}

// Self-consistent polar angle of a ray with invariant n sin(theta).
double refract_into(const CrystalSpec& crystal, double wavelength_nm, Polarization pol,
                    double invariant, double azimuth) {
    const auto& m = crystal.model;
    if (pol == Polarization::Ordinary) {
        const double s = invariant / index_ordinary(m, wavelength_nm);
        if (std::fabs(s) >= 1.0) throw GeometryError("ray is totally internally reflected");
        return std::asin(s);
    }
    double polar = std::asin(std::clamp(invariant / index_ordinary(m, wavelength_nm), -1.0, 1.0));
    for (int i = 0; i < 100; ++i) {
        const double axis_angle =
            angle_to_axis(Vec3::from_angles(polar, azimuth), crystal.optic_axis());
        const double s = invariant / index_extraordinary(m, wavelength_nm, axis_angle);
        if (std::fabs(s) >= 1.0) throw GeometryError("ray is totally internally reflected");
        const double next = std::asin(s);
        if (std::fabs(next - polar) < 1e-15) return next;
        polar = next;
    }
    return polar;
}

struct Transit {
    double polar;
    double time_fs;
};

// Time to cross `fraction` of the slab for a ray with the given invariant.
Transit transit(const CrystalSpec& crystal, double wavelength_nm, Polarization pol,
                double invariant, double azimuth, double fraction) {
    const double polar = refract_into(crystal, wavelength_nm, pol, invariant, azimuth);
    Wave wave = Wave::ordinary();
    if (pol == Polarization::Extraordinary)
        wave = Wave::extraordinary(
            angle_to_axis(Vec3::from_angles(polar, azimuth), crystal.optic_axis()));
    const double n_g = group_index(crystal.model, wavelength_nm, wave);
    return {polar, transit_time_fs(fraction * slab_path_length(crystal, polar), n_g)};
}

double pump_time(const CrystalSpec& crystal, const PumpSpec& pump) {
    return transit_time_fs(crystal.thickness_mm,
                           group_index(crystal.model, pump.center_nm,
                                       Wave::extraordinary(crystal.cut_angle)));
}

// Exit time of a photon generated at the centre of `source` and, when it is
// the first crystal, passing through `other` as well.
double photon_time(const CrystalSpec& source, const CrystalSpec* other, double lambda,
                   Polarization pol, double invariant, double azimuth) {
    double t = transit(source, lambda, pol, invariant, azimuth, 0.5).time_fs;
    if (other != nullptr) t += transit(*other, lambda, pol, invariant, azimuth, 1.0).time_fs;
    return t;
}

ClassTimes add(const ClassTimes& a, const ClassTimes& b) {
    return {a.e1 + b.e1, a.o1 + b.o1, a.e2 + b.e2, a.o2 + b.o2};
}

void require_nonnegative(const ClassTimes& d) {
    if (d.e1 < 0.0 || d.o1 < 0.0 || d.e2 < 0.0 || d.o2 < 0.0)
        throw ArgumentError("per-class delays must be non-negative");
}

} // namespace

Cascade make_cascade(const DispersionModel& model, double thickness_mm, double cut_angle) {
    return make_cascade(model, thickness_mm, thickness_mm, cut_angle);
}

Cascade make_cascade(const DispersionModel& model, double first_thickness_mm,
                     double second_thickness_mm, double cut_angle) {
    return {{model, first_thickness_mm, cut_angle, +1},
            {model, second_thickness_mm, cut_angle, -1}};
}

void validate(const Cascade& cascade) {
    validate(cascade.first);
    validate(cascade.second);
    if (cascade.first.axis_sign != -cascade.second.axis_sign)
        throw ArgumentError("cascade crystals need mirrored optic axes (+psi, -psi)");
    if (std::fabs(cascade.first.cut_angle - cascade.second.cut_angle) > 1e-12)
        throw ArgumentError("cascade crystals need equal cut angles");
    if (cascade.first.model.name != cascade.second.model.name)
        throw ArgumentError("cascade crystals must be the same material");
}

double collinear_mismatch(const CrystalSpec& crystal, const PumpSpec& pump) {
    const double lambda_dc = pump.degenerate_wavelength();
    return index_ordinary(crystal.model, lambda_dc) +
           index_extraordinary(crystal.model, lambda_dc, crystal.cut_angle) -
           2.0 * pump_index(crystal, pump);
}

double collinear_cut_angle(const DispersionModel& model, const PumpSpec& pump) {
    validate(pump);
    auto f = [&](double psi) {
        return collinear_mismatch(CrystalSpec{model, 1.0, psi, +1}, pump);
    };
    const double lo = 1e-6, hi = kPi / 2 - 1e-6;
    if (f(lo) * f(hi) > 0.0)
        throw PhaseMatchError(model.name + ": no collinear type-II cut angle exists",
                              f(hi));
    return solve_root(f, lo, hi);
}

PhaseMatchedPair solve_phase_matching(const CrystalSpec& crystal, const PumpSpec& pump,
                                      double e_azimuth) {
    validate(crystal);
    validate(pump);
    const double lambda_dc = pump.degenerate_wavelength();
    const double n_o = index_ordinary(crystal.model, lambda_dc);
    const double n_p = pump_index(crystal, pump);
    auto residual = [&](double polar) {
        return probe(crystal, lambda_dc, n_o, n_p, e_azimuth, polar).residual;
    };

    const double at_axis = residual(0.0);
    if (at_axis < 0.0) {
        std::ostringstream os;
        os << crystal.model.name << " at cut angle " << rad_to_deg(crystal.cut_angle)
           << " deg is not phase-matchable for " << pump.center_nm
           << " nm (collinear mismatch " << at_axis << ")";
        throw PhaseMatchError(os.str(), at_axis);
    }
    if (at_axis == 0.0) return probe(crystal, lambda_dc, n_o, n_p, e_azimuth, 0.0).pair;

    constexpr double step = 0.01;
    double lo = 0.0;
    double hi = step;
    while (residual(hi) > 0.0) {
        lo = hi;
        hi += step;
        if (hi > kMaxPolar)
            throw PhaseMatchError("phase-matching root not bracketed below 1.2 rad",
                                  residual(kMaxPolar));
    }
    const double polar = solve_root(residual, lo, hi);
    return probe(crystal, lambda_dc, n_o, n_p, e_azimuth, polar).pair;
}

ConePair phase_match_cones(const CrystalSpec& crystal, const PumpSpec& pump) {
    // e photon towards +x / -x, o partners opposite.
    const PhaseMatchedPair plus = solve_phase_matching(crystal, pump, 0.0);
    const PhaseMatchedPair minus = solve_phase_matching(crystal, pump, kPi);

    auto cone = [](double edge_plus_x, double edge_minus_x) {
        // edges are polar angles on the +x and -x sides of the pump
        return Cone{0.5 * (edge_plus_x - edge_minus_x), 0.5 * (edge_plus_x + edge_minus_x)};
    };
    auto ext = [](double polar, double n) { return std::asin(std::min(1.0, n * std::sin(polar))); };

    // Edges are measured on the +x and -x sides, so a mirrored crystal
    // (axis_sign = -1) comes out mirrored without special handling.
    ConePair out;
    out.extraordinary = cone(plus.e_polar, minus.e_polar);
    out.ordinary = cone(minus.o_polar, plus.o_polar);
    out.extraordinary_external =
        cone(ext(plus.e_polar, plus.e_index), ext(minus.e_polar, minus.e_index));
    out.ordinary_external =
        cone(ext(minus.o_polar, minus.o_index), ext(plus.o_polar, plus.o_index));
    return out;
}

int cone_intersections(const Cone& a, const Cone& b, double tolerance) {
    const double d = std::fabs(a.axis_tilt - b.axis_tilt);
    const double outer = a.half_opening + b.half_opening;
    const double inner = std::fabs(a.half_opening - b.half_opening);
    if (std::fabs(d - outer) <= tolerance || std::fabs(d - inner) <= tolerance) return 1;
    return (d < outer && d > inner) ? 2 : 0;
}

double internal_polar_angle(const CrystalSpec& crystal, double wavelength_nm,
                            Polarization polarization, double transverse_invariant,
                            double azimuth) {
    return refract_into(crystal, wavelength_nm, polarization, transverse_invariant, azimuth);
}

double slab_path_length(const CrystalSpec& crystal, double internal_polar) {
    const double c = std::cos(internal_polar);
    if (c <= kGrazingCos) {
        std::ostringstream os;
        os << "degenerate geometry: internal polar angle " << internal_polar
           << " rad is grazing or backward";
        throw GeometryError(os.str());
    }
    return crystal.thickness_mm / c;
}

double internal_path_length(const CrystalSpec& crystal, const Vec3& external_direction,
                            Polarization polarization, double wavelength_nm) {
    const double norm = external_direction.norm();
    if (!(norm > 0.0) || external_direction.z / norm <= kGrazingCos)
        throw GeometryError("degenerate geometry: direction must point along +z");
    const double sin_ext = std::hypot(external_direction.x, external_direction.y) / norm;
    const double azimuth = std::atan2(external_direction.y, external_direction.x);
    return slab_path_length(
        crystal, refract_into(crystal, wavelength_nm, polarization, sin_ext, azimuth));
}

double pairing_mismatch(const ClassTimes& t) {
    return std::max(std::fabs(t.e1 - t.o2), std::fabs(t.o1 - t.e2));
}

ClassTimes emission_times_along(const Cascade& cascade, const PumpSpec& pump,
                                const Vec3& external_direction, const ClassTimes& delays) {
    validate(cascade);
    validate(pump);
    require_nonnegative(delays);
    const double norm = external_direction.norm();
    if (!(norm > 0.0) || external_direction.z / norm <= kGrazingCos)
        throw GeometryError("degenerate geometry: direction must point along +z");
    const double invariant = std::hypot(external_direction.x, external_direction.y) / norm;
    const double azimuth = std::atan2(external_direction.y, external_direction.x);
    const double lambda = pump.degenerate_wavelength();
    const auto& c1 = cascade.first;
    const auto& c2 = cascade.second;
    const double tp1 = pump_time(c1, pump);
    const double tp2 = pump_time(c2, pump);

    using P = Polarization;
    ClassTimes t;
    t.e1 = 0.5 * tp1 + photon_time(c1, &c2, lambda, P::Extraordinary, invariant, azimuth);
    t.o1 = 0.5 * tp1 + photon_time(c1, &c2, lambda, P::Ordinary, invariant, azimuth);
    t.e2 = tp1 + 0.5 * tp2 + photon_time(c2, nullptr, lambda, P::Extraordinary, invariant, azimuth);
    t.o2 = tp1 + 0.5 * tp2 + photon_time(c2, nullptr, lambda, P::Ordinary, invariant, azimuth);
    return add(t, delays);
}

ClassTimes emission_times_at(const Cascade& cascade, const PumpSpec& pump, double phi,
                             const ClassTimes& delays) {
    validate(cascade);
    validate(pump);
    require_nonnegative(delays);
    const double lambda = pump.degenerate_wavelength();
    const auto& c1 = cascade.first;
    const auto& c2 = cascade.second;
    const double tp1 = pump_time(c1, pump);
    const double tp2 = pump_time(c2, pump);

    // e photon of each crystal at phi; o photon at phi is the partner of the
    // e photon at phi + pi.
    const PhaseMatchedPair e_first = solve_phase_matching(c1, pump, phi);
    const PhaseMatchedPair o_first = solve_phase_matching(c1, pump, phi + kPi);
    const PhaseMatchedPair e_second = solve_phase_matching(c2, pump, phi);
    const PhaseMatchedPair o_second = solve_phase_matching(c2, pump, phi + kPi);

    using P = Polarization;
    ClassTimes t;
    t.e1 = 0.5 * tp1 + photon_time(c1, &c2, lambda, P::Extraordinary,
                                   e_first.e_index * std::sin(e_first.e_polar), phi);
    t.o1 = 0.5 * tp1 + photon_time(c1, &c2, lambda, P::Ordinary,
                                   o_first.o_index * std::sin(o_first.o_polar), phi);
    t.e2 = tp1 + 0.5 * tp2 +
           photon_time(c2, nullptr, lambda, P::Extraordinary,
                       e_second.e_index * std::sin(e_second.e_polar), phi);
    t.o2 = tp1 + 0.5 * tp2 +
           photon_time(c2, nullptr, lambda, P::Ordinary,
                       o_second.o_index * std::sin(o_second.o_polar), phi);
    return add(t, delays);
}

std::vector<double> uniform_phi_grid(std::size_t n) {
    if (n == 0) throw ArgumentError("phi grid needs at least one point");
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    return grid;
}

EmissionTimeMap emission_time_map(const Cascade& cascade, const PumpSpec& pump,
                                  const ClassTimes& delays, std::span<const double> phi_grid) {
    validate(cascade);
    validate(pump);
    require_nonnegative(delays);
    if (phi_grid.empty()) throw ArgumentError("phi grid is empty");
    for (std::size_t i = 0; i < phi_grid.size(); ++i) {
        if (phi_grid[i] < 0.0 || phi_grid[i] >= 2.0 * kPi)
            throw ArgumentError("phi grid values must lie in [0, 2 pi)");
        if (i > 0 && !(phi_grid[i] > phi_grid[i - 1]))
            throw ArgumentError("phi grid must be strictly increasing");
    }

    EmissionTimeMap map;
    map.phi.assign(phi_grid.begin(), phi_grid.end());
    map.applied_delays = delays;
    map.times.reserve(phi_grid.size());
    for (double phi : phi_grid) map.times.push_back(emission_times_at(cascade, pump, phi, delays));
    return map;
}

double pairing_mismatch(const EmissionTimeMap& map) {
    if (map.times.size() < 64)
        throw ArgumentError("pairing mismatch needs a map with at least 64 phi points");
    double worst = 0.0;
    for (const auto& t : map.times) worst = std::max(worst, pairing_mismatch(t));
    return worst;
}

ClassTimes balancing_delays(const EmissionTimeMap& map) {
    if (map.times.empty()) throw ArgumentError("empty emission-time map");
    const auto& d = map.applied_delays;
    double b_lo = std::numeric_limits<double>::infinity(), b_hi = -b_lo;
    double a_lo = b_lo, a_hi = -b_lo;
    for (const auto& t : map.times) {
        const double b = (t.o2 - d.o2) - (t.e1 - d.e1); // beam with 1e and 2o
        const double a = (t.o1 - d.o1) - (t.e2 - d.e2); // beam with 1o and 2e
        b_lo = std::min(b_lo, b);
        b_hi = std::max(b_hi, b);
        a_lo = std::min(a_lo, a);
        a_hi = std::max(a_hi, a);
    }
    const double b_mid = 0.5 * (b_lo + b_hi);
    const double a_mid = 0.5 * (a_lo + a_hi);
    ClassTimes out;
    (b_mid >= 0.0 ? out.e1 : out.o2) = std::fabs(b_mid);
    (a_mid >= 0.0 ? out.e2 : out.o1) = std::fabs(a_mid);
    return out;
}

} // namespace spdc
