#pragma once

#include "nvist/convolution.hpp"
#include "nvist/grid.hpp"
#include "nvist/krylov.hpp"

namespace nvist {

struct CgoOptions {
  double tol = 1e-8;
  int max_iter = 300;
  int restart = 60;
  double blowup_threshold = 1e6;
  double support_tol = 1e-12;  // q is treated as zero below this fraction of max|q|
};

struct CGOResult {
  Complex k{};
  Field mu;                 // empty grid when not requested
  Complex t{};              // h^2 sum e_k q mu
  double residual = 0.0;
  int iterations = 0;
  bool exceptional = false;
  double mu_sup_dev = 0.0;  // sup |mu - 1| over the support window
};

/// Symbol inverse of dbar(d + ik) on the half-cell shifted frequency lattice
/// zeta + (pi/2L)(1 + i), which never contains zeta = 0.
struct FaddeevMultiplier {
  Grid2D grid;
  Complex k{};          // possibly snapped
  bool snapped = false;
  ComplexArray values;  // -4 / (zeta (conj(zeta) + 2k))
};

FaddeevMultiplier faddeev_multiplier(const Grid2D& g, Complex k);
/// g_k * f evaluated through the multiplier (quasi-periodic on the grid).
Field apply_multiplier(const FaddeevMultiplier& m, const Field& f);
/// dbar (d + ik) u with symbols on the same shifted lattice.
Field faddeev_operator(const Field& u, Complex k);

/// Lippmann-Schwinger solver for mu(., k) with the sampled Faddeev kernel on the support
/// window of q. Construction is shared; solve() is const and safe to call concurrently.
class CgoSolver {
 public:
  explicit CgoSolver(const Field& q, CgoOptions opt = {});
  CGOResult solve(Complex k, bool want_mu = true) const;

  const IndexBox& window() const { return box_; }
  const CgoOptions& options() const { return opt_; }

 private:
  Field q_;
  CgoOptions opt_;
  IndexBox box_;
  ComplexArray qw_;
};

CGOResult solve_cgo(const Field& q, Complex k, const CgoOptions& opt = {});

}  // namespace nvist
