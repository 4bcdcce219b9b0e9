#pragma once

#include "nvist/scatter.hpp"

namespace nvist {

/// exp(i tau (k^3 + conj(k)^3))
Complex nv_phase(Complex k, double tau);

/// Multiplies t and s (grid and ray) by nv_phase(k, tau); advances the tau tag.
ScatteringData evolve(const ScatteringData& sd, double tau);

}  // namespace nvist
