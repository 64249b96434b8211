#include "spdc/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

struct Vertex {
    double x;
    double y;
};

// Vertex of the parabola through three samples; falls back to the middle
// sample when they are collinear.
Vertex parabola_vertex(const ScanPoint& a, const ScanPoint& b, const ScanPoint& c) {
    const double d1 = (b.value - a.value) / (b.x - a.x);
    const double d2 = (c.value - b.value) / (c.x - b.x);
    const double curvature = (d2 - d1) / (c.x - a.x);
    if (curvature == 0.0) return {b.x, b.value};
    // y = y_b + slope (x - x_b) + curvature (x - x_b)^2
    const double slope = d1 + curvature * (b.x - a.x);
    const double dx = -slope / (2.0 * curvature);
    if (std::fabs(dx) > (c.x - a.x)) return {b.x, b.value};
    return {b.x + dx, b.value - slope * slope / (4.0 * curvature)};
}

double line_search(auto&& f, double lo, double hi) {
    std::uintmax_t iterations = 500;
    return boost::math::tools::brent_find_minima(f, lo, hi, 40, iterations).first;
}

void require_step(double step, double bound, const char* what) {
    if (!(step > 0.0) || step > bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << what << " step " << step << " must be positive and at most " << bound;
        throw ArgumentError(os.str());
    }
}

double group_birefringence(const DispersionModel& plate, double wavelength_nm) {
    return std::fabs(group_index(plate, wavelength_nm, Wave::ordinary()) -
                     group_index(plate, wavelength_nm, Wave::extraordinary(kPi / 2)));
}

} // namespace

std::string_view abscissa_label(AbscissaKind kind) {
    switch (kind) {
    case AbscissaKind::DelayFs:
        return "tau_B_fs";
    case AbscissaKind::QuartzMm:
        return "quartz_mm";
    case AbscissaKind::AnalyzerRad:
        return "theta_B_rad";
    }
    return "x";
}

void validate(const ScanSeries& series) {
    if (series.points.size() < 2) throw ArgumentError("scan series needs at least two points");
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        if (!(series.points[i].value >= 0.0))
            throw ArgumentError("scan series values must be non-negative");
        if (i > 0 && !(series.points[i].x > series.points[i - 1].x))
            throw ArgumentError("scan series abscissa must be strictly increasing");
    }
}

std::vector<double> sweep_points(const Sweep& sweep) {
    if (!(sweep.step > 0.0) || !std::isfinite(sweep.step))
        throw ArgumentError("sweep step must be positive");
    if (!(sweep.stop >= sweep.start)) throw ArgumentError("sweep stop must not precede start");
    const auto n = static_cast<std::size_t>(std::floor((sweep.stop - sweep.start) / sweep.step + 1e-9));
    std::vector<double> xs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) xs[i] = sweep.start + static_cast<double>(i) * sweep.step;
    return xs;
}

NumericOptimum optimize_delays_numeric(const InterferenceParams& params, const SearchBox& box) {
    validate(params);
    if (!(box.tau_a_max > box.tau_a_min) || !(box.tau_b_max > box.tau_b_min))
        throw ArgumentError("search box is empty or inverted");

    // Maximizing the windowed envelope is minimizing its deficit inside Rect.
    // The deficit never exceeds 4, so 5 marks points outside the window.
    constexpr double outside = 5.0;
    auto deficit = [&](double a, double b) {
        return rect_window(params, a, b) ? envelope_deficit(params, a, b) : outside;
    };

    // Coarse 1 fs grid, edges included.
    auto grid = [](double lo, double hi) {
        auto xs = sweep_points({lo, hi, 1.0});
        if (xs.back() < hi) xs.push_back(hi);
        return xs;
    };
    double best_a = box.tau_a_min, best_b = box.tau_b_min;
    double best = std::numeric_limits<double>::infinity();
    for (double a : grid(box.tau_a_min, box.tau_a_max)) {
        for (double b : grid(box.tau_b_min, box.tau_b_max)) {
            const double v = deficit(a, b);
            if (v < best) {
                best = v;
                best_a = a;
                best_b = b;
            }
        }
    }

    // The envelope is smooth along tau_A - tau_B and has a kink along
    // tau_A + tau_B, so the diagonals are searched as well as the axes.
    constexpr double h = std::numbers::sqrt2 / 2.0;
    constexpr std::array<std::array<double, 2>, 4> directions{
        {{1.0, 0.0}, {0.0, 1.0}, {h, h}, {h, -h}}};
    constexpr double reach = 2.0; // fs, beyond one coarse cell
    for (int cycle = 0; cycle < 50; ++cycle) {
        const double start_a = best_a, start_b = best_b;
        for (const auto& d : directions) {
            double lo = -reach, hi = reach;
            auto clip = [&](double p, double dp, double mn, double mx) {
                if (dp > 0.0) {
                    lo = std::max(lo, (mn - p) / dp);
                    hi = std::min(hi, (mx - p) / dp);
                } else if (dp < 0.0) {
                    lo = std::max(lo, (mx - p) / dp);
                    hi = std::min(hi, (mn - p) / dp);
                }
            };
            clip(best_a, d[0], box.tau_a_min, box.tau_a_max);
            clip(best_b, d[1], box.tau_b_min, box.tau_b_max);
            if (!(hi > lo)) continue;
            auto along = [&](double t) { return deficit(best_a + t * d[0], best_b + t * d[1]); };
            const double t = line_search(along, lo, hi);
            const double v = along(t);
            if (v < best) {
                best = v;
                best_a = std::clamp(best_a + t * d[0], box.tau_a_min, box.tau_a_max);
                best_b = std::clamp(best_b + t * d[1], box.tau_b_min, box.tau_b_max);
            }
        }
        if (std::hypot(best_a - start_a, best_b - start_b) < 1e-4) break;
    }

    constexpr double edge = 0.01;
    const bool on_boundary = best_a - box.tau_a_min < edge || box.tau_a_max - best_a < edge ||
                             best_b - box.tau_b_min < edge || box.tau_b_max - best_b < edge;
    return {{best_a, best_b}, envelope(params, best_a, best_b), on_boundary};
}

ScanSeries delay_scan(const InterferenceParams& params, const AnalyzerDelayConfig& base,
                      const Sweep& tau_b) {
    validate(params);
    const double period = fringe_period(params);
    require_step(tau_b.step, period / 8.0, "delay scan");

    ScanSeries series;
    series.kind = AbscissaKind::DelayFs;
    series.fringe_period_fs = period;
    series.snapshot = {{"theta_A_rad", base.theta_a},
                       {"theta_B_rad", base.theta_b},
                       {"tau_A_fs", base.tau_a},
                       {"sigma_rad_per_fs", params.sigma},
                       {"omega_rad_per_fs", params.omega},
                       {"phi0_rad", params.phase0}};
    AnalyzerDelayConfig cfg = base;
    for (double x : sweep_points(tau_b)) {
        cfg.tau_b = x;
        series.points.push_back({x, coincidence_rate(params, cfg).rate});
    }
    return series;
}

ScanSeries polarization_scan(const InterferenceParams& params, double tau_a, double tau_b,
                             double theta_a, const Sweep& theta_b, Coherence coherence) {
    validate(params);
    require_step(theta_b.step, kPi / 64.0, "polarization scan");

    ScanSeries series;
    series.kind = AbscissaKind::AnalyzerRad;
    series.snapshot = {{"theta_A_rad", theta_a},
                       {"tau_A_fs", tau_a},
                       {"tau_B_fs", tau_b},
                       {"sigma_rad_per_fs", params.sigma},
                       {"phi0_rad", params.phase0}};
    AnalyzerDelayConfig cfg{theta_a, 0.0, tau_a, tau_b};
    for (double x : sweep_points(theta_b)) {
        cfg.theta_b = x;
        series.points.push_back({x, coincidence_rate(params, cfg, coherence).rate});
    }
    return series;
}

double extract_visibility(const ScanSeries& series) {
    validate(series);
    const auto& pts = series.points;
    const double span = pts.back().x - pts.front().x;
    if (series.kind == AbscissaKind::DelayFs && series.fringe_period_fs > 0.0 &&
        span < 2.0 * series.fringe_period_fs * (1.0 - 1e-9))
        throw ArgumentError("delay scan must span at least two fringe periods");
    if (series.kind == AbscissaKind::AnalyzerRad && span < kPi * (1.0 - 1e-9))
        throw ArgumentError("analyzer scan must span at least pi");

    std::size_t i_max = 0, i_min = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].value > pts[i_max].value) i_max = i;
        if (pts[i].value < pts[i_min].value) i_min = i;
    }
    double r_max = pts[i_max].value;
    double r_min = pts[i_min].value;
    if (i_max > 0 && i_max + 1 < pts.size())
        r_max = std::max(r_max, parabola_vertex(pts[i_max - 1], pts[i_max], pts[i_max + 1]).y);
    if (i_min > 0 && i_min + 1 < pts.size())
        r_min = std::max(0.0, std::min(r_min,
                                       parabola_vertex(pts[i_min - 1], pts[i_min], pts[i_min + 1]).y));
    if (r_max + r_min == 0.0)
        throw UndefinedVisibilityError("visibility undefined: max + min of the series is zero");
    return (r_max - r_min) / (r_max + r_min);
}

double measure_fringe_period(const ScanSeries& series) {
    validate(series);
    const auto& pts = series.points;
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        if (pts[i].value > pts[i - 1].value && pts[i].value >= pts[i + 1].value)
            peaks.push_back(parabola_vertex(pts[i - 1], pts[i], pts[i + 1]).x);
    }
    if (peaks.size() < 2) throw ArgumentError("series shows fewer than two fringe maxima");
    return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

ScanSeries visibility_curve(const InterferenceParams& params, double tau_a, const Sweep& tau_b) {
    validate(params);
    ScanSeries curve;
    curve.kind = AbscissaKind::DelayFs;
    curve.ordinate = "visibility";
    curve.fringe_period_fs = fringe_period(params);
    curve.snapshot = {{"tau_A_fs", tau_a},
                      {"theta_A_rad", kPi / 4},
                      {"theta_B_rad", kPi / 4},
                      {"sigma_rad_per_fs", params.sigma}};
    for (double x : sweep_points(tau_b))
        curve.points.push_back({x, local_visibility(params, {kPi / 4, kPi / 4, tau_a, x})});
    return curve;
}

double fringe_locked_tau_b(const InterferenceParams& params, double tau_a, double tau_b) {
    validate(params);
    const double m = std::round((params.omega * (tau_a - tau_b) + params.phase0) / kPi);
    return tau_a + (params.phase0 - m * kPi) / params.omega;
}

double quartz_delay(const DispersionModel& plate, double wavelength_nm, double thickness_mm) {
    if (!(thickness_mm >= 0.0)) throw ArgumentError("plate thickness must be non-negative");
    return transit_time_fs(thickness_mm, group_birefringence(plate, wavelength_nm));
}

double quartz_thickness(const DispersionModel& plate, double wavelength_nm, double delay_fs) {
    if (!(delay_fs >= 0.0)) throw ArgumentError("plate delay must be non-negative");
    return delay_fs * kSpeedOfLight / (kNmPerMm * group_birefringence(plate, wavelength_nm));
}

DelayPrescription prescribe_delays(const DelayPair& delays, const DispersionModel& plate,
                                   double wavelength_nm) {
    return {delays.tau_a, delays.tau_b,
            quartz_thickness(plate, wavelength_nm, std::fabs(delays.tau_a)),
            quartz_thickness(plate, wavelength_nm, std::fabs(delays.tau_b))};
}

} // namespace spdc
