#pragma once

#include <vector>

#include "nvist/dbar.hpp"

namespace nvist {

struct ReconstructOptions {
  DbarOptions dbar;
  int recon_n = 64;     // points per side of the recon grid
  int extend = 2;       // recon box half-width in units of xgrid.L, a power of two; evolved q leaves the x-box
  int workers = 1;
  double reality_tol = 1e-3;
  int tail_order = 3;  // multipole terms fitted to a1 and a2 beyond the frame
};

struct ReconstructedState {
  double tau = 0.0;
  Field q;       // x-grid, imaginary part dropped
  Field q_wide;  // x-grid spacing over the recon box, imaginary part dropped
  Field u;       // x-grid, i d a1
  Field a1;      // recon grid, half-width extend * L
  Field a2;      // recon grid
  double reality_defect = 0.0;
  int max_iterations = 0;
  int tail_order = 3;
};

/// q = i dbar a1 and u = i d a1 from d-bar solves on the recon grid. a1 is resampled to the
/// x-grid spacing over the whole recon box, differentiated there and cropped to xgrid.
/// Throws SymmetryViolation if max|Im q| / max|q| on xgrid exceeds reality_tol.
ReconstructedState reconstruct_q(const ScatteringData& sd, const Grid2D& xgrid, const ReconstructOptions& opt = {});

/// u with dbar u = d q: multiplier conj(zeta)/zeta, zero mode and Nyquist set to 0.
Field compute_u(const Field& q);

/// Spatial part of the NV equation: dbar^3 q + d^3 q - 3 dbar(conj(u) q) - 3 d(u q).
Field nv_rhs(const Field& q, const Field& u);

struct IdentityDefects {
  double d1 = 0.0;  // i dbar a2 = dbar(-d a1 + i a1^2 / 2)
  double d2 = 0.0;  // i d a2 = d(-d a1 + i a1^2 / 2)
};

/// Relative sup-norms of the two residuals on the recon grid, each scaled by
/// the larger side of its identity.
IdentityDefects identity_defects(const ReconstructedState& state);

struct NvResidual {
  Field residual;
  double rel_norm = 0.0;       // sup|residual| / sup|d_tau q|
  double reality_defect = 0.0;  // worst of the three reconstructions
  Field q;                      // centre reconstruction
};

/// Centered difference in tau over reconstructions at tau - dtau, tau, tau + dtau. The
/// spatial terms are taken on the recon box and the residual is cropped to xgrid.
/// `linear` drops the quadratic terms.
NvResidual nv_residual(const ScatteringData& sd0, const Grid2D& xgrid, double tau, double dtau,
                       const ReconstructOptions& opt = {}, bool linear = false);

/// q(x) = (i/pi) int dbar_x[e_{-x} s conj(mu)] dm(k), the x-derivative taken inside the
/// integral: analytically on e_{-x}, by centered differences of width delta on mu.
Complex q_derivative_inside(const DbarSolver& solver, Complex x, double delta = 1e-3);

}  // namespace nvist
