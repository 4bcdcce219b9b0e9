#include "nvist/cgo.hpp"

#include <cmath>
#include <stdexcept>

#include "nvist/errors.hpp"
#include "nvist/fft.hpp"
#include "nvist/special.hpp"

namespace nvist {

namespace {

Complex lattice_shift(const Grid2D& g) {
  const double s = M_PI / (2.0 * g.L);
  return {s, s};
}

// Bloch-shifted transform pair: frequencies zeta + shift.
ComplexArray shifted_forward(const Grid2D& g, const ComplexArray& f) {
  const Complex s = lattice_shift(g);
  ComplexArray a(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      a(i, j) = f(i, j) * std::polar(1.0, -(s.real() * i + s.imag() * j) * g.h());
  fft2(a);
  return a;
}

ComplexArray shifted_inverse(const Grid2D& g, ComplexArray a) {
  const Complex s = lattice_shift(g);
  ifft2(a);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) a(i, j) *= std::polar(1.0, (s.real() * i + s.imag() * j) * g.h());
  return a;
}

bool near_lattice(double v, double spacing, double offset) {
  const double c = (v - offset) / spacing;
  return std::abs(c - std::round(c)) < 1e-9;
}

}  // namespace

FaddeevMultiplier faddeev_multiplier(const Grid2D& g, Complex k) {
  FaddeevMultiplier m;
  m.grid = g;
  m.k = k;
  const double cell = M_PI / g.L;
  const Complex s = lattice_shift(g);
  const Complex target = -2.0 * std::conj(k);
  if (near_lattice(target.real(), cell, s.real()) && near_lattice(target.imag(), cell, s.imag())) {
    m.k += cell / 4.0;  // moves -2 conj(k) by half a cell
    m.snapped = true;
  }
  m.values.resize(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const Complex z = g.zeta(i, j) + s;
      const Complex den = z * (std::conj(z) + 2.0 * m.k);
      if (std::abs(den) == 0.0) throw NumericalError("cgo", "Faddeev multiplier hit a lattice singularity");
      m.values(i, j) = -4.0 / den;
    }
  return m;
}

Field apply_multiplier(const FaddeevMultiplier& m, const Field& f) {
  ComplexArray a = shifted_forward(m.grid, f.values);
  a *= m.values;
  return {m.grid, shifted_inverse(m.grid, std::move(a))};
}

Field faddeev_operator(const Field& u, Complex k) {
  const Grid2D& g = u.grid;
  const Complex s = lattice_shift(g);
  const Complex I(0.0, 1.0);
  ComplexArray a = shifted_forward(g, u.values);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const Complex z = g.zeta(i, j) + s;
      a(i, j) *= (I * z / 2.0) * (I * std::conj(z) / 2.0 + I * k);
    }
  return {g, shifted_inverse(g, std::move(a))};
}

// ---- Lippmann-Schwinger solve ----------------------------------------------

CgoSolver::CgoSolver(const Field& q, CgoOptions opt) : q_(q), opt_(opt) {
  box_ = support_box(q, opt.support_tol, 0);
  if (box_.size() > 0) qw_ = q.values.block(box_.row0, box_.col0, box_.rows, box_.cols);
}

CGOResult CgoSolver::solve(Complex k, bool want_mu) const {
  if (k == Complex{}) throw std::domain_error("CGO solutions require k != 0");
  const Grid2D& g = q_.grid;
  CGOResult r;
  r.k = k;
  if (box_.size() == 0) {
    if (want_mu) r.mu = Field::constant(g, 1.0);
    return r;
  }
  const double h = g.h(), area = g.cell_area();
  auto kernel = [&](int di, int dj) {
    return area * faddeev_kernel_sample(k, Complex(di * h, dj * h), h);
  };
  const LatticeConvolution S(box_, box_, kernel);
  const int W = box_.size();
  ComplexArray work(box_.rows, box_.cols), conv;

  auto apply = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& out) {
    Eigen::Map<Eigen::ArrayXcd>(work.data(), W) = v.array();
    work *= qw_;
    S.apply(work, conv);
    out = v - Eigen::Map<const Eigen::VectorXcd>(conv.data(), W);
  };
  S.apply(qw_, conv);
  const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(conv.data(), W);
  Eigen::VectorXcd m = Eigen::VectorXcd::Zero(W);
  const KrylovResult kr = gmres(apply, rhs, m, KrylovOptions{opt_.tol, opt_.max_iter, opt_.restart});
  r.iterations = kr.iterations;
  r.residual = kr.residual;
  r.mu_sup_dev = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  r.exceptional = !kr.converged || !std::isfinite(r.mu_sup_dev) || r.mu_sup_dev > opt_.blowup_threshold;

  Eigen::Map<Eigen::ArrayXcd>(work.data(), W) = 1.0 + m.array();
  work *= qw_;  // q mu on the window
  Complex t = 0.0;
  for (int a = 0; a < box_.rows; ++a)
    for (int b = 0; b < box_.cols; ++b) {
      const Complex x = g.point(box_.row0 + a, box_.col0 + b);
      t += std::polar(1.0, 2.0 * (k * x).real()) * work(a, b);
    }
  r.t = r.exceptional ? Complex{} : area * t;

  if (want_mu) {
    const LatticeConvolution full(box_, IndexBox{0, 0, g.n, g.n}, kernel);
    ComplexArray mu;
    full.apply(work, mu);
    r.mu = Field(g, 1.0 + mu);
  }
  return r;
}

CGOResult solve_cgo(const Field& q, Complex k, const CgoOptions& opt) {
  return CgoSolver(q, opt).solve(k, true);
}

}  // namespace nvist
