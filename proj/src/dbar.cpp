#include "nvist/dbar.hpp"

#include "nvist/errors.hpp"
#include "nvist/krylov.hpp"

namespace nvist {

namespace {

ComplexArray effective_s(const ScatteringData& sd, bool subk_model) {
  ComplexArray s = sd.s;
  if (!subk_model) return s;
  const KGrid& kg = sd.kgrid;
  for (int a = 0; a < kg.m; ++a)
    for (int b = 0; b < kg.m; ++b) {
      const Complex k = kg.point(a, b);
      const double r = std::abs(k);
      if (sd.mask(a, b) == kExcluded && r > 0.0 && r < kg.k_min())
        s(a, b) = -1.0 / (std::conj(k) * std::log(r * r));
    }
  return s;
}

// e_{-x}(k) = exp(-2i Re(x k))
ComplexArray pairing(const Grid2D& g, Complex x) { return pairing_factor(g, x, -1).values; }

}  // namespace

DbarSolver::DbarSolver(const ScatteringData& sd, DbarOptions opt)
    : grid_(sd.kgrid.grid()), k_min_(sd.kgrid.k_min()), k_max_(sd.kgrid.k_max), tau_(sd.tau), opt_(opt), s_(effective_s(sd, opt.subk_model)), P_(grid_, opt.kernel) {}

Field DbarSolver::apply_T(Complex x, const Field& f) const {
  ComplexArray g = s_ * pairing(grid_, x) * f.values.conjugate();
  Field out(grid_);
  P_.apply(g, out.values);
  return out;
}

DbarResult DbarSolver::solve(Complex x, const Eigen::VectorXd* warm, Eigen::VectorXd* final) const {
  return solve_impl(x, warm, final, opt_.keep_mu);
}

DbarResult DbarSolver::solve_with_mu(Complex x) const { return solve_impl(x, nullptr, nullptr, true); }

DbarResult DbarSolver::solve_impl(Complex x, const Eigen::VectorXd* warm, Eigen::VectorXd* final,
                                  bool keep_mu) const {
  const int m = grid_.n, N = m * m;
  DbarResult r;
  r.x = x;
  r.tau = tau_;
  const ComplexArray w = s_ * pairing(grid_, x);  // s e_{-x}
  if (w.abs().maxCoeff() == 0.0) {
    if (keep_mu) r.mu_k = Field::constant(grid_, 1.0);
    if (final) final->setZero(2 * N);
    return r;
  }

  ComplexArray f(m, m), pf(m, m);
  auto to_complex = [&](const Eigen::VectorXd& v, ComplexArray& c) {
    for (int i = 0; i < N; ++i) c.data()[i] = Complex(v[i], v[N + i]);
  };
  auto to_real = [&](const ComplexArray& c, Eigen::VectorXd& v) {
    for (int i = 0; i < N; ++i) {
      v[i] = c.data()[i].real();
      v[N + i] = c.data()[i].imag();
    }
  };
  ComplexArray mvec(m, m);
  auto apply = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    to_complex(v, mvec);
    f = w * mvec.conjugate();
    P_.apply(f, pf);
    out.resize(2 * N);
    to_real(mvec - pf, out);
  };
  P_.apply(w, pf);  // T(1)
  Eigen::VectorXd rhs(2 * N);
  to_real(pf, rhs);
  Eigen::VectorXd sol = warm ? *warm : Eigen::VectorXd::Zero(2 * N);
  const KrylovResult kr = gmres(apply, rhs, sol, KrylovOptions{opt_.tol, opt_.max_iter, opt_.restart});
  r.iterations = kr.iterations;
  r.residual = kr.residual;
  if (!kr.converged)
    throw NumericalError("invert", "d-bar solve did not converge at x = (" + std::to_string(x.real()) + ", " +
                                       std::to_string(x.imag()) + "), residual " + std::to_string(kr.residual));
  to_complex(sol, mvec);
  const ComplexArray mu = 1.0 + mvec;
  f = w * mu.conjugate();
  const double c = grid_.cell_area() / M_PI;
  Complex a1 = 0.0, a2 = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      a1 += f(a, b);
      a2 += grid_.point(a, b) * f(a, b);
    }
  r.a1 = c * a1;
  r.a2 = c * a2;
  if (keep_mu) r.mu_k = Field(grid_, mu);
  if (final) *final = sol;
  return r;
}

Field apply_T(const ScatteringData& sd, Complex x, const Field& f) { return DbarSolver(sd).apply_T(x, f); }

DbarResult solve_mu(const ScatteringData& sd, Complex x, const DbarOptions& opt) {
  DbarOptions o = opt;
  o.keep_mu = true;
  return DbarSolver(sd, o).solve(x);
}

double dbar_residual(const DbarSolver& solver, const DbarResult& r, int margin_cells) {
  const Grid2D& g = solver.kgrid();
  const ComplexArray& s = solver.s();
  const double smax = s.abs().maxCoeff();
  if (smax == 0.0 || r.mu_k.values.size() == 0) return 0.0;
  const Field f(g, s * pairing_factor(g, r.x, -1).values * r.mu_k.values.conjugate());
  const Field m1(g, r.mu_k.values - 1.0);
  const Field dmu = spectral_derivative(m1, Derivative::dbar, cauchy_tail(f, 12, g.L / 4.0));
  // samples whose neighbourhood stays inside the support of s
  double worst = 0.0;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b) {
      bool interior = true;
      for (int da = -margin_cells; da <= margin_cells && interior; ++da)
        for (int db = -margin_cells; db <= margin_cells && interior; ++db) {
          const int aa = a + da, bb = b + db;
          if (aa < 0 || bb < 0 || aa >= g.n || bb >= g.n || s(aa, bb) == Complex{}) interior = false;
        }
      if (!interior) continue;
      worst = std::max(worst, std::abs(dmu.values(a, b) - f.values(a, b)));
    }
  return worst / smax;
}

}  // namespace nvist
