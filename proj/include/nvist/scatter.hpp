#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "nvist/cgo.hpp"
#include "nvist/grid.hpp"
#include "nvist/special.hpp"

namespace nvist {

/// Log-spaced radial samples k = r e^{i angle}, r in [k_lo, k_hi].
struct RaySpec {
  double k_lo = 1e-3;
  double k_hi = 1e-1;
  int count = 0;
  double angle = 0.3;
};

/// m x m Cartesian samples on [-k_max, k_max)^2 with the disk |k| < k_min excluded.
struct KGrid {
  double k_max = 6.0;
  int m = 64;
  int k_min_cells = 2;
  RaySpec ray;

  double hk() const { return 2.0 * k_max / m; }
  double k_min() const { return k_min_cells * hk(); }
  Grid2D grid() const { return Grid2D{k_max, m, GridKind::k}; }
  Complex point(int a, int b) const { return {-k_max + a * hk(), -k_max + b * hk()}; }
  bool in_band(Complex k) const {
    const double r = std::abs(k);
    return r >= k_min() && r <= k_max;
  }
  std::vector<Complex> ray_points() const;
};

/// Validates the k-grid invariants (m even, k_min_cells >= 2, ray ordering).
KGrid make_kgrid(double k_max, int m, int k_min_cells = 2, RaySpec ray = {});

enum MaskValue : std::uint8_t { kData = 0, kExcluded = 1, kExceptional = 2 };
using MaskArray = GridArray<std::uint8_t>;

struct RaySample {
  Complex k{};
  Complex t{};
  bool exceptional = false;
  double mu_sup_dev = 0.0;
  int iterations = 0;
};

struct ExceptionalRing {
  double radius = 0.0;
  double mu_sup_dev = 0.0;
};

struct ScatteringData {
  KGrid kgrid;
  ComplexArray t;  // zero where masked
  ComplexArray s;  // t / (pi conj(k))
  MaskArray mask;
  double tau = 0.0;
  std::vector<RaySample> ray;
  std::vector<ExceptionalRing> rings;
  int max_iterations = 0;

  Field t_field() const { return {kgrid.grid(), t}; }
  Field s_field() const { return {kgrid.grid(), s}; }
  int exceptional_count() const;
};

/// Empty data on the grid with the exclusion mask applied.
ScatteringData empty_scattering_data(const KGrid& kg);
/// Recomputes s from t on unmasked samples and zeroes masked ones.
void refresh_s(ScatteringData& sd);

struct ForwardOptions {
  CgoOptions cgo;
  int workers = 1;
  bool refine_rings = true;  // golden-section search on local maxima of sup|mu - 1| along the ray
};

/// t(k) = h^2 sum e_k q mu(., k) on every unmasked grid sample and ray sample.
ScatteringData scattering_transform(const Field& q, const KGrid& kg, const ForwardOptions& opt = {});

/// Radial search for exceptional circles between consecutive ray radii.
std::vector<ExceptionalRing> refine_exceptional_rings(const CgoSolver& solver, std::vector<RaySample>& ray);

/// max over matched pairs of |t(k) - conj t(-k)| / max|t|.
double symmetry_defect(const ScatteringData& sd);

struct SmallKFit {
  double slope = 0.0;       // d Re(1/t) / d log|k|
  double intercept = 0.0;
  double im_slope = 0.0;    // d Im(1/t) / d log|k|
  double a_est = std::numeric_limits<double>::quiet_NaN();
  double gamma_abs = std::numeric_limits<double>::quiet_NaN();
  bool degenerate = false;
  double first_decade_max = 0.0;  // max|t| on [k_hi/10, k_hi]
  double final_decade_max = 0.0;  // max|t| on [k_lo, 10 k_lo]
  int samples = 0;
};

/// Least-squares fit of 1/t against log|k| on the ray. a_est uses
/// 1/t = (2/pi)(c_inf/a - gamma) - (2/pi) log|k|; gamma_abs is the constant implied by a_ref.
SmallKFit small_k_fit(const ScatteringData& sd, double c_inf, double gamma = kEulerGamma,
                      std::optional<double> a_ref = std::nullopt, double k_lo = 1e-3, double k_hi = 1e-1);

struct XNorm {
  double value = 0.0;
  double l2 = 0.0;
  double high = 0.0;  // |k^n s| in L^{r'+eps}
  double lr = 0.0;    // |k^n s| in L^r, counted once
  double symmetry_defect = 0.0;  // max|conj(k) s(k) + k conj s(-k)| / max|k s|
};

XNorm x_norm(const ScatteringData& sd, int n, double r, double eps);

}  // namespace nvist
