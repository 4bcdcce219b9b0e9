#pragma once

#include "nvist/grid.hpp"

namespace nvist {

inline constexpr double kEulerGamma = 0.57721566490153286061;
/// Trapezoid weight for the log singularity: h^2 sum' log|x| + h^2 (log h + C) ~ integral.
/// C = log 2 + log(pi)/2 - 2 log Gamma(1/4).
inline constexpr double kLogCellConstant = -1.31053292591151;

/// e^w E1(w) on the principal branch (w != 0).
Complex exp_e1(Complex w);
/// E1(w) on the principal branch.
Complex expint_e1(Complex w);
/// e^w Re E1(w); bounded along every ray, continuous across the branch cut.
Complex exp_re_e1(Complex w);

/// Fundamental solution of dbar (d + ik): g_k(x) = -(2/pi) e^{-ikx} Re E1(-ikx).
Complex faddeev_green(Complex k, Complex x);
/// Lattice-sampled kernel with the cell-averaged value at x = 0 (spacing h).
Complex faddeev_kernel_sample(Complex k, Complex x, double h);

/// -(2/pi) log|x|, cell-averaged at the origin.
double log_kernel_sample(Complex x, double h);

}  // namespace nvist
