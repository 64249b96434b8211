#include <doctest.h>

#include <cmath>

#include "spdc/analysis.hpp"
#include "spdc/errors.hpp"
#include "spdc/units.hpp"

using namespace spdc;

namespace {

InterferenceParams params_for(double thickness_mm, double bandwidth_nm = 1.0) {
    const PumpSpec pump{395.0, bandwidth_nm};
    const CrystalSpec crystal{bbo(), thickness_mm, deg_to_rad(43.65), +1};
    return InterferenceParams::from(axial_propagation_times(crystal, pump), pump);
}

SearchBox box_around(const DelayPair& d, double half) {
    return {d.tau_a - half, d.tau_a + half, d.tau_b - half, d.tau_b + half};
}

ScanSeries synthetic(AbscissaKind kind, double span, int n, auto&& f) {
    ScanSeries s;
    s.kind = kind;
    for (int i = 0; i <= n; ++i) {
        const double x = span * i / n;
        s.points.push_back({x, f(x)});
    }
    return s;
}

} // namespace

TEST_CASE("sweeps include their end point") {
    const auto xs = sweep_points({0.0, 1.0, 0.1});
    CHECK(xs.size() == 11);
    CHECK(xs.back() == doctest::Approx(1.0));
    CHECK(sweep_points({2.0, 2.0, 1.0}).size() == 1);
    CHECK_THROWS_AS(sweep_points({0.0, 1.0, 0.0}), ArgumentError);
    CHECK_THROWS_AS(sweep_points({1.0, 0.0, 0.1}), ArgumentError);
}

TEST_CASE("numeric optimizer reproduces the closed-form delays") {
    for (double thickness : {0.8, 1.07, 1.5}) {
        for (double bandwidth : {0.5, 1.0, 2.0}) {
            CAPTURE(thickness);
            CAPTURE(bandwidth);
            const auto p = params_for(thickness, bandwidth);
            const auto closed = optimal_delays(p.times);
            const auto numeric = optimize_delays_numeric(p, box_around(closed, 60.0));
            CHECK(std::fabs(numeric.delays.tau_a - closed.tau_a) < 0.5);
            CHECK(std::fabs(numeric.delays.tau_b - closed.tau_b) < 0.5);
            CHECK_FALSE(numeric.on_boundary);
        }
    }
}

TEST_CASE("optimum location does not depend on the pump bandwidth") {
    auto p = params_for(1.07);
    p.sigma *= 10.0;
    const auto closed = optimal_delays(p.times);
    const auto numeric = optimize_delays_numeric(p, box_around(closed, 40.0));

    // brute-force oracle on a 0.02 fs grid around the closed form; the
    // envelope itself rounds to 2 here, so candidates are ranked by deficit
    double best = 10.0, best_a = 0.0, best_b = 0.0;
    for (int i = -150; i <= 150; ++i) {
        for (int j = -150; j <= 150; ++j) {
            const double a = closed.tau_a + 0.02 * i, b = closed.tau_b + 0.02 * j;
            const double v = envelope_deficit(p, a, b);
            if (v < best) {
                best = v;
                best_a = a;
                best_b = b;
            }
        }
    }
    CHECK(std::fabs(numeric.delays.tau_a - best_a) < 0.05);
    CHECK(std::fabs(numeric.delays.tau_b - best_b) < 0.05);
    CHECK(std::fabs(numeric.delays.tau_a - closed.tau_a) < 0.5);
    CHECK(std::fabs(numeric.delays.tau_b - closed.tau_b) < 0.5);
    CHECK(envelope(p, closed.tau_a, closed.tau_b) == 2.0);
}

TEST_CASE("optimizer flags maxima on the search box edge") {
    const auto p = params_for(1.07);
    const auto closed = optimal_delays(p.times);
    const SearchBox shifted{closed.tau_a - 10, closed.tau_a + 10, closed.tau_b + 5, closed.tau_b + 40};
    const auto numeric = optimize_delays_numeric(p, shifted);
    CHECK(numeric.on_boundary);
    CHECK(numeric.delays.tau_b == doctest::Approx(shifted.tau_b_min).epsilon(1e-6));
    CHECK_THROWS_AS(optimize_delays_numeric(p, {1, 0, 0, 1}), ArgumentError);
}

TEST_CASE("delay scan at the optimum") {
    const auto p = params_for(1.07);
    const auto d = optimal_delays(p.times);
    const double period = fringe_period(p);
    const auto scan = delay_scan(p, {kPi / 4, kPi / 4, d.tau_a, d.tau_b},
                                 {d.tau_b - 50, d.tau_b + 50, period / 32});
    CHECK(abscissa_label(scan.kind) == "tau_B_fs");
    CHECK(measure_fringe_period(scan) == doctest::Approx(period).epsilon(1e-3));
    CHECK(std::fabs(measure_fringe_period(scan) - 2.63) < 0.03);
    const double v = extract_visibility(scan);
    CHECK(std::fabs(v - max_visibility(p)) < 0.01);

    const auto crossed = delay_scan(p, {0.0, kPi / 2, d.tau_a, d.tau_b},
                                    {d.tau_b - 50, d.tau_b + 50, period / 32});
    CHECK(extract_visibility(crossed) < 1e-6);

    CHECK_THROWS_AS(delay_scan(p, {kPi / 4, kPi / 4, d.tau_a, 0}, {0, 10, period / 4}),
                    ArgumentError);
}

TEST_CASE("visibility extraction on synthetic series") {
    const auto cosine = synthetic(AbscissaKind::DelayFs, 4 * kPi, 256,
                                  [](double x) { return 1 + std::cos(x); });
    CHECK(extract_visibility(cosine) == doctest::Approx(1.0).epsilon(1e-9));

    const auto partial = synthetic(AbscissaKind::DelayFs, 4 * kPi, 256,
                                   [](double x) { return 1 + 0.4 * std::cos(x + 0.3); });
    CHECK(extract_visibility(partial) == doctest::Approx(0.4).epsilon(1e-4));
    auto scaled = partial;
    for (auto& pt : scaled.points) pt.value *= 7.5;
    CHECK(extract_visibility(scaled) == doctest::Approx(extract_visibility(partial)).epsilon(1e-12));

    const auto flat = synthetic(AbscissaKind::DelayFs, 10.0, 50, [](double) { return 0.3; });
    CHECK(extract_visibility(flat) == 0.0);
    CHECK_THROWS_AS(measure_fringe_period(flat), ArgumentError);

    const auto zeros = synthetic(AbscissaKind::DelayFs, 10.0, 50, [](double) { return 0.0; });
    CHECK_THROWS_AS(extract_visibility(zeros), UndefinedVisibilityError);

    auto short_scan = cosine;
    short_scan.fringe_period_fs = 2 * kPi;
    short_scan.points.resize(100);
    CHECK_THROWS_AS(extract_visibility(short_scan), ArgumentError);

    const auto short_analyzer = synthetic(AbscissaKind::AnalyzerRad, 2.0, 50,
                                          [](double x) { return 1 + std::cos(x); });
    CHECK_THROWS_AS(extract_visibility(short_analyzer), ArgumentError);

    ScanSeries negative = cosine;
    negative.points[3].value = -1.0;
    CHECK_THROWS_AS(validate(negative), ArgumentError);
}

TEST_CASE("polarization scans") {
    const auto p = params_for(1.07);
    const auto d = optimal_delays(p.times);
    const double locked = fringe_locked_tau_b(p, d.tau_a, d.tau_b);
    CHECK(std::fabs(locked - d.tau_b) <= fringe_period(p) / 4 + 1e-9);
    CHECK(std::fabs(std::cos(p.omega * (d.tau_a - locked) + p.phase0)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const Sweep half_turn{0.0, kPi, kPi / 128};
    const auto diagonal = polarization_scan(p, d.tau_a, locked, kPi / 4, half_turn);
    CHECK(abscissa_label(diagonal.kind) == "theta_B_rad");
    CHECK(std::fabs(extract_visibility(diagonal) - max_visibility(p)) < 0.01);

    const auto aligned = polarization_scan(p, d.tau_a, locked, 0.0, half_turn);
    CHECK(extract_visibility(aligned) == 1.0);

    const auto mixture = polarization_scan(p, d.tau_a, locked, kPi / 4, half_turn, Coherence::Mixture);
    CHECK(extract_visibility(mixture) < 1e-9);

    CHECK_THROWS_AS(polarization_scan(p, d.tau_a, locked, kPi / 4, {0.0, kPi, kPi / 32}),
                    ArgumentError);
}

TEST_CASE("visibility curve") {
    const auto p = params_for(1.07);
    const auto d = optimal_delays(p.times);
    const auto curve = visibility_curve(p, d.tau_a, {d.tau_b - 100, d.tau_b + 100, 2.0});
    CHECK(curve.ordinate == "visibility");
    const ScanPoint* peak = &curve.points.front();
    for (const auto& pt : curve.points)
        if (pt.value > peak->value) peak = &pt;
    CHECK(std::fabs(peak->x - d.tau_b) < 30.0);
    CHECK(peak->value > 0.8);

    // entirely below the Rect window
    const double lower = p.times.ordinary - p.times.extraordinary - d.tau_a;
    const auto tail = visibility_curve(p, d.tau_a, {lower - 60, lower - 20, 5.0});
    for (const auto& pt : tail.points) CHECK(pt.value == 0.0);

    // thicker crystals move the peak later
    const auto thick = params_for(1.1);
    CHECK(optimal_delays(thick.times).tau_b > d.tau_b);
    CHECK(optimal_delays(thick.times).tau_b < 440.0);
}

TEST_CASE("quartz delay calibration") {
    CHECK(std::fabs(quartz_delay(crystal_quartz(), 790.0, 1.0) - 31.0) < 3.0);
    CHECK(std::fabs(quartz_thickness(crystal_quartz(), 790.0, 440.0) - 14.2) < 0.7);
    for (double mm : {0.0, 0.37, 1.0, 13.3}) {
        const double fs = quartz_delay(crystal_quartz(), 790.0, mm);
        CHECK(std::fabs(quartz_thickness(crystal_quartz(), 790.0, fs) - mm) < 1e-9);
    }
    CHECK(quartz_delay(crystal_quartz(), 790.0, 2.0) ==
          doctest::Approx(2 * quartz_delay(crystal_quartz(), 790.0, 1.0)));
    CHECK_THROWS_AS(quartz_delay(crystal_quartz(), 790.0, -1.0), ArgumentError);
    CHECK_THROWS_AS(quartz_delay(crystal_quartz(), 5000.0, 1.0), RangeError);

    const auto rx = prescribe_delays({-31.0, 410.0}, crystal_quartz(), 790.0);
    CHECK(rx.plate_a_mm == doctest::Approx(quartz_thickness(crystal_quartz(), 790.0, 31.0)));
    CHECK(rx.plate_b_mm == doctest::Approx(quartz_thickness(crystal_quartz(), 790.0, 410.0)));
}
