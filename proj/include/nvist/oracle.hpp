#pragma once

#include "nvist/field.hpp"

namespace nvist {

/// Exact solution of d_tau q = d^3 q + dbar^3 q: multiplier exp(-i tau (zeta^3 + conj(zeta)^3) / 8).
Field linear_solution(const Field& q0, double tau);

struct StepOptions {
  double imag_tol = 1e-8;        // max|Im q| / max|q| allowed before each realification
  bool enforce_dt_rule = true;   // reject dt above max_stable_dt
};

/// 0.5 (h/pi)^3 8, the cubic-dispersion bound.
double max_stable_dt(const Grid2D& g);
/// Smallest step count whose dt obeys max_stable_dt.
int default_steps(const Grid2D& g, double tau);

/// Integrating-factor RK4 for the full NV system with u recomputed from q at every stage
/// and 2/3-rule dealiasing. steps <= 0 selects default_steps.
Field step_nv(const Field& q0, double tau, int steps = 0, const StepOptions& opt = {});

/// The two integrators on the zero-padded box widened(q0.grid, factor), cropped back to
/// q0.grid, so the dispersive tail does not wrap around the original box.
Field linear_solution_padded(const Field& q0, double tau, int factor);
Field step_nv_padded(const Field& q0, double tau, int factor, const StepOptions& opt = {});

}  // namespace nvist
