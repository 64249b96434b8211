#pragma once

#include "spdc/delays.hpp"
#include "spdc/materials.hpp"

namespace spdc {

/// Inputs of the coincidence-rate model.
struct InterferenceParams {
    PropagationTimes times;
    double sigma = 0.0;  // pump spectral width [rad/fs]
    double omega = 0.0;  // degenerate photon angular frequency [rad/fs]
    double phase0 = 0.0; // constant fringe phase [rad]

    /// omega = half the pump centre frequency, sigma from the pump bandwidth.
    static InterferenceParams from(const PropagationTimes& times, const PumpSpec& pump,
                                   double phase0 = 0.0);
};

/// Throws DegenerateParametersError when sigma <= 0, omega <= 0,
/// 2 t_p - t_o - t_e == 0 or t_o == t_e.
void validate(const InterferenceParams& params);

/// Polarization analyzer angles [rad] and birefringent delays [fs].
struct AnalyzerDelayConfig {
    double theta_a = 0.0;
    double theta_b = 0.0;
    double tau_a = 0.0;
    double tau_b = 0.0;
};

/// 1 on the open interval t_o - t_e < tau_A + tau_B < 3 t_o - t_e - t_e',
/// 0 elsewhere (boundaries included).
bool rect_window(const InterferenceParams& params, double tau_a, double tau_b);

/// Slowly varying envelope V(tau_A, tau_B): difference of two error
/// functions. The Rect window is not applied here.
double envelope(const InterferenceParams& params, double tau_a, double tau_b);

/// 2 - envelope, evaluated as a sum of complementary error functions so it
/// keeps full relative precision where the envelope saturates at 2.
double envelope_deficit(const InterferenceParams& params, double tau_a, double tau_b);

/// Whether the interference term is included in the rate.
enum class Coherence { Coherent, Mixture };

struct RateSample {
    double rate = 0.0;
    bool clamped = false; // the raw expression was negative and was clipped to 0
};

/// Normalized coincidence rate
///   R = 1/2 { [cos qA sin qB]^2 + [cos qB sin qA]^2
///           + sqrt(8 pi) cos qB sin qB cos qA sin qA cos[w (tA - tB) + phi0]
///             V Rect / (sigma (2 t_p - t_o - t_e)) }.
/// Coherence::Mixture drops the last term.
RateSample coincidence_rate(const InterferenceParams& params, const AnalyzerDelayConfig& cfg,
                            Coherence coherence = Coherence::Coherent);

/// sqrt(8 pi) V Rect / (sigma (2 t_p - t_o - t_e)): the factor multiplying the
/// analyzer and fringe terms.
double interference_factor(const InterferenceParams& params, double tau_a, double tau_b);

/// 2 pi / omega [fs].
double fringe_period(const InterferenceParams& params);

/// Contrast (R_max - R_min) / (R_max + R_min) of the fringe at fixed analyzer
/// angles and delays, found by cycling the fringe phase through one period.
/// Throws UndefinedVisibilityError when both extremes are zero.
double local_visibility(const InterferenceParams& params, const AnalyzerDelayConfig& cfg);

/// Fringe visibility at qA = qB = pi/4 with tau_A at its closed-form optimum
/// and tau_B at the envelope peak, the fringe cycled through one period at
/// fixed envelope.
double max_visibility(const InterferenceParams& params);

/// Peak interference-term magnitude against the projection terms at
/// qA = qB = pi/4 and optimal delays. A ratio above 1 would force clamping.
struct TermBalance {
    double interference_peak = 0.0;
    double projection = 0.0;
    double ratio = 0.0;
};

TermBalance term_balance(const InterferenceParams& params);

} // namespace spdc
