#pragma once

#include "spdc/materials.hpp"

namespace spdc {

/// Birefringent delays [fs] applied to the e photon in beams A and B.
struct DelayPair {
    double tau_a = 0.0;
    double tau_b = 0.0;
};

/// Closed-form compensation delays:
///   tau_A = (3 t_o - t_e - 2 t_p) / 2
///   tau_B = (t_o - t_e - 2 t_e' + 2 t_p) / 2
inline DelayPair optimal_delays(const PropagationTimes& t) {
    return {0.5 * (3.0 * t.ordinary - t.extraordinary - 2.0 * t.pump),
            0.5 * (t.ordinary - t.extraordinary - 2.0 * t.extraordinary_second + 2.0 * t.pump)};
}

} // namespace spdc
