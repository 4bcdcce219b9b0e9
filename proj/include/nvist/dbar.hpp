#pragma once

#include "nvist/field.hpp"
#include "nvist/scatter.hpp"

namespace nvist {

struct DbarOptions {
  double tol = 1e-8;
  int max_iter = 300;
  int restart = 60;
  bool subk_model = false;  // fill 0 < |k| < k_min with s = -1/(conj(k) log|k|^2)
  bool keep_mu = false;
  CauchyKernel kernel = CauchyKernel::truncated;
};

struct DbarResult {
  Complex x{};
  double tau = 0.0;
  Field mu_k;  // empty unless requested
  Complex a1{}, a2{};
  double residual = 0.0;
  int iterations = 0;
};

/// Real-linear solver for mu(x, ., tau) = 1 + P[s e_{-x} conj(mu)] on the k-grid.
/// The operator set-up is shared; solve() is const and thread-safe.
class DbarSolver {
 public:
  DbarSolver(const ScatteringData& sd, DbarOptions opt = {});

  DbarResult solve(Complex x, const Eigen::VectorXd* warm = nullptr, Eigen::VectorXd* final = nullptr) const;
  /// solve() with mu_k filled regardless of the keep_mu option.
  DbarResult solve_with_mu(Complex x) const;
  /// (T f)(k) = P[s e_{-x} conj(f)](k)
  Field apply_T(Complex x, const Field& f) const;
  /// s as used by the solver (after the optional small-k model).
  const ComplexArray& s() const { return s_; }
  const Grid2D& kgrid() const { return grid_; }
  double tau() const { return tau_; }
  double k_min() const { return k_min_; }
  double k_max() const { return k_max_; }
  const DbarOptions& options() const { return opt_; }

 private:
  DbarResult solve_impl(Complex x, const Eigen::VectorXd* warm, Eigen::VectorXd* final, bool keep_mu) const;

  Grid2D grid_;
  double k_min_, k_max_;
  double tau_;
  DbarOptions opt_;
  ComplexArray s_;
  CauchyOperator P_;
};

Field apply_T(const ScatteringData& sd, Complex x, const Field& f);
DbarResult solve_mu(const ScatteringData& sd, Complex x, const DbarOptions& opt = {});

/// sup|dbar_k mu - s e_{-x} conj(mu)| / sup|s| over samples at least `margin_cells`
/// cells inside the support of s. A jump of s (the excluded disk, the k_max cut)
/// leaves a Gibbs floor in the spectral derivative near it.
double dbar_residual(const DbarSolver& solver, const DbarResult& r, int margin_cells = 3);

}  // namespace nvist
