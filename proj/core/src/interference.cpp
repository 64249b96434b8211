#include "spdc/interference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/minima.hpp>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

double walkoff_denominator(const PropagationTimes& t) {
    return 2.0 * t.pump - t.ordinary - t.extraordinary;
}

// Arg min of f on [lo, hi]; Brent's method (golden section with parabolic
// steps), ~1e-9 relative tolerance.
double minimize(auto&& f, double lo, double hi) {
    std::uintmax_t iterations = 500;
    return boost::math::tools::brent_find_minima(f, lo, hi, 30, iterations).first;
}

} // namespace

InterferenceParams InterferenceParams::from(const PropagationTimes& times, const PumpSpec& pump,
                                            double phase0) {
    validate(pump);
    return {times, pump.sigma(), pump.degenerate_frequency(), phase0};
}

void validate(const InterferenceParams& params) {
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma))
        throw DegenerateParametersError("sigma must be positive");
    if (!(params.omega > 0.0) || !std::isfinite(params.omega))
        throw DegenerateParametersError("omega must be positive");
    if (walkoff_denominator(params.times) == 0.0)
        throw DegenerateParametersError("degenerate parameters: 2 t_p - t_o - t_e == 0");
    if (params.times.ordinary == params.times.extraordinary)
        throw DegenerateParametersError("degenerate parameters: t_o == t_e");
}

bool rect_window(const InterferenceParams& params, double tau_a, double tau_b) {
    const auto& t = params.times;
    const double sum = tau_a + tau_b;
    return sum > t.ordinary - t.extraordinary &&
           sum < 3.0 * t.ordinary - t.extraordinary - t.extraordinary_second;
}

namespace {

struct EnvelopeArguments {
    double upper;
    double lower;
};

EnvelopeArguments envelope_arguments(const InterferenceParams& params, double tau_a,
                                     double tau_b) {
    const auto& t = params.times;
    const double k = params.sigma / (4.0 * std::sqrt(2.0));
    const double ratio = walkoff_denominator(t) / (t.ordinary - t.extraordinary);
    const double spread = std::fabs(2.0 * t.ordinary - t.extraordinary - t.extraordinary_second -
                                    tau_a - tau_b);
    const double diff = tau_a - tau_b;
    return {k * (diff + 4.0 * t.pump - 2.0 * t.ordinary - t.extraordinary -
                 t.extraordinary_second - ratio * spread),
            k * (diff + t.extraordinary - t.extraordinary_second + ratio * spread)};
}

} // namespace

double envelope(const InterferenceParams& params, double tau_a, double tau_b) {
    const auto [upper, lower] = envelope_arguments(params, tau_a, tau_b);
    return std::erf(upper) - std::erf(lower);
}

double envelope_deficit(const InterferenceParams& params, double tau_a, double tau_b) {
    const auto [upper, lower] = envelope_arguments(params, tau_a, tau_b);
    return std::erfc(upper) + std::erfc(-lower);
}

double interference_factor(const InterferenceParams& params, double tau_a, double tau_b) {
    if (!rect_window(params, tau_a, tau_b)) return 0.0;
    return std::sqrt(8.0 * kPi) * envelope(params, tau_a, tau_b) /
           (params.sigma * walkoff_denominator(params.times));
}

RateSample coincidence_rate(const InterferenceParams& params, const AnalyzerDelayConfig& cfg,
                            Coherence coherence) {
    validate(params);
    const double ca = std::cos(cfg.theta_a), sa = std::sin(cfg.theta_a);
    const double cb = std::cos(cfg.theta_b), sb = std::sin(cfg.theta_b);
    double bracket = (ca * sb) * (ca * sb) + (cb * sa) * (cb * sa);
    if (coherence == Coherence::Coherent) {
        const double fringe =
            std::cos(params.omega * (cfg.tau_a - cfg.tau_b) + params.phase0);
        bracket += cb * sb * ca * sa * fringe * interference_factor(params, cfg.tau_a, cfg.tau_b);
    }
    const double rate = 0.5 * bracket;
    if (rate < 0.0) return {0.0, true};
    return {rate, false};
}

double fringe_period(const InterferenceParams& params) {
    if (!(params.omega > 0.0)) throw DegenerateParametersError("omega must be positive");
    return 2.0 * kPi / params.omega;
}

double local_visibility(const InterferenceParams& params, const AnalyzerDelayConfig& cfg) {
    validate(params);
    // The fringe phase is cycled with the delays held fixed, so the envelope
    // is the same at the fringe maximum and minimum. A delay sweep would read
    // the minima off the sloped flanks of the envelope's kink.
    const double at_delays = params.omega * (cfg.tau_a - cfg.tau_b);
    auto rate_at_phase = [&](double fringe_phase) {
        InterferenceParams shifted = params;
        shifted.phase0 = fringe_phase - at_delays;
        return coincidence_rate(shifted, cfg).rate;
    };
    const double a = rate_at_phase(0.0);
    const double b = rate_at_phase(kPi);
    const double r_max = std::max(a, b);
    const double r_min = std::min(a, b);
    if (r_max + r_min <= 0.0) throw UndefinedVisibilityError("visibility undefined: zero rate");
    return (r_max - r_min) / (r_max + r_min);
}

double max_visibility(const InterferenceParams& params) {
    validate(params);
    const DelayPair opt = optimal_delays(params.times);
    const double period = fringe_period(params);

    const double half_window = std::max(50.0, 8.0 * period);
    const double peak = minimize(
        [&](double tau_b) { return envelope_deficit(params, opt.tau_a, tau_b); },
        opt.tau_b - half_window, opt.tau_b + half_window);

    return local_visibility(params, {kPi / 4, kPi / 4, opt.tau_a, peak});
}

TermBalance term_balance(const InterferenceParams& params) {
    validate(params);
    const DelayPair opt = optimal_delays(params.times);
    // At qA = qB = pi/4 each analyzer product is 1/4.
    const double projection = 0.5 * (0.25 + 0.25);
    const double peak = 0.5 * 0.25 * std::fabs(interference_factor(params, opt.tau_a, opt.tau_b));
    return {peak, projection, peak / projection};
}

} // namespace spdc
