#include "nvist/reconstruct.hpp"

#include "nvist/errors.hpp"
#include "nvist/evolve.hpp"
#include "nvist/parallel.hpp"

namespace nvist {

namespace {

const Complex I(0.0, 1.0);

Field tail_derivative(const Field& f, Derivative which, int order) {
  return spectral_derivative(f, which, fit_multipole_tail(f, order));
}

double sup_ratio(const ComplexArray& num, const ComplexArray& a, const ComplexArray& b) {
  const double scale = std::max(a.abs().maxCoeff(), b.abs().maxCoeff());
  return scale == 0.0 ? 0.0 : num.abs().maxCoeff() / scale;
}

}  // namespace

ReconstructedState reconstruct_q(const ScatteringData& sd, const Grid2D& xgrid, const ReconstructOptions& opt) {
  const Grid2D fine = widened(xgrid, opt.extend);
  const Grid2D rg = opt.recon_n >= fine.n ? fine : make_grid(fine.L, opt.recon_n, GridKind::x);
  DbarOptions dopt = opt.dbar;
  dopt.keep_mu = false;
  const DbarSolver solver(sd, dopt);

  ReconstructedState st;
  st.tau = sd.tau;
  st.tail_order = opt.tail_order;
  st.a1 = Field(rg);
  st.a2 = Field(rg);
  std::vector<int> row_iterations(rg.n, 0);
  // one task per row, warm-started along the row so results do not depend on scheduling
  parallel_for(rg.n, opt.workers, [&](int i) {
    Eigen::VectorXd prev, next;
    for (int j = 0; j < rg.n; ++j) {
      const DbarResult r = solver.solve(rg.point(i, j), j == 0 ? nullptr : &prev, &next);
      st.a1.values(i, j) = r.a1;
      st.a2.values(i, j) = r.a2;
      row_iterations[i] = std::max(row_iterations[i], r.iterations);
      std::swap(prev, next);
    }
  });
  for (int it : row_iterations) st.max_iterations = std::max(st.max_iterations, it);

  const MultipoleTail tail = fit_multipole_tail(st.a1, opt.tail_order);
  const Field a1f = resample(st.a1, fine, tail);
  Field qw = spectral_derivative(a1f, Derivative::dbar, tail);
  qw.values *= I;
  st.u = crop(spectral_derivative(a1f, Derivative::d, tail), xgrid);
  st.u.values *= I;

  const Field q = crop(qw, xgrid);
  const double qmax = q.sup();
  st.reality_defect = qmax == 0.0 ? 0.0 : q.values.imag().abs().maxCoeff() / qmax;
  if (st.reality_defect > opt.reality_tol) throw SymmetryViolation(st.reality_defect, opt.reality_tol);
  st.q_wide = real_part(qw);
  st.q = crop(st.q_wide, xgrid);
  return st;
}

Field compute_u(const Field& q) {
  const Grid2D& g = q.grid;
  ComplexArray v = q.values;
  fft2(v);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const Complex z = g.zeta(i, j);
      v(i, j) = (z == Complex{} || g.is_nyquist(i) || g.is_nyquist(j)) ? Complex{} : v(i, j) * std::conj(z) / z;
    }
  ifft2(v);
  return {g, std::move(v)};
}

Field nv_rhs(const Field& q, const Field& u) {
  const Field uq(q.grid, u.values * q.values);
  const Field ubq(q.grid, u.values.conjugate() * q.values);
  return spectral_derivative(q, Derivative::dbar3) + spectral_derivative(q, Derivative::d3) -
         3.0 * spectral_derivative(ubq, Derivative::dbar) - 3.0 * spectral_derivative(uq, Derivative::d);
}

IdentityDefects identity_defects(const ReconstructedState& st) {
  const int p = st.tail_order;
  const Field& a1 = st.a1;
  const Field da1 = tail_derivative(a1, Derivative::d, p);
  const Field db_a1 = tail_derivative(a1, Derivative::dbar, p);
  const ComplexArray lhs1 = I * tail_derivative(st.a2, Derivative::dbar, p).values;
  const ComplexArray lhs2 = I * tail_derivative(st.a2, Derivative::d, p).values;
  const ComplexArray rhs1 = -tail_derivative(da1, Derivative::dbar, p + 1).values + I * a1.values * db_a1.values;
  const ComplexArray rhs2 = -tail_derivative(da1, Derivative::d, p + 1).values + I * a1.values * da1.values;
  return {sup_ratio(lhs1 - rhs1, lhs1, rhs1), sup_ratio(lhs2 - rhs2, lhs2, rhs2)};
}

NvResidual nv_residual(const ScatteringData& sd0, const Grid2D& xgrid, double tau, double dtau,
                       const ReconstructOptions& opt, bool linear) {
  if (!(dtau > 0.0)) throw ConfigError("dtau must be positive");
  const double taus[3] = {tau - dtau, tau, tau + dtau};
  ReconstructedState st[3];
  // each reconstruction already spreads over the workers
  for (int i = 0; i < 3; ++i) st[i] = reconstruct_q(evolve(sd0, taus[i]), xgrid, opt);

  // spatial terms on the recon box, where q has decayed; measured on xgrid
  NvResidual out;
  const Field& q = st[1].q_wide;
  const Field dq(q.grid, (st[2].q_wide.values - st[0].q_wide.values) / (2.0 * dtau));
  Field rhs = linear ? spectral_derivative(q, Derivative::dbar3) + spectral_derivative(q, Derivative::d3)
                     : nv_rhs(q, compute_u(q));
  out.residual = crop(dq - rhs, xgrid);
  const double scale = crop(dq, xgrid).sup();
  out.rel_norm = scale == 0.0 ? 0.0 : out.residual.sup() / scale;
  for (const auto& s : st) out.reality_defect = std::max(out.reality_defect, s.reality_defect);
  out.q = st[1].q;
  return out;
}

Complex q_derivative_inside(const DbarSolver& solver, Complex x, double delta) {
  const Grid2D& g = solver.kgrid();
  auto mu_at = [&](Complex y) { return solver.solve_with_mu(y).mu_k.values; };
  const ComplexArray mu = mu_at(x);
  const ComplexArray dmu = (0.5 / (2.0 * delta)) * ((mu_at(x + delta) - mu_at(x - delta)) -
                                                    I * (mu_at(x + I * delta) - mu_at(x - I * delta)));
  const ComplexArray e = pairing_factor(g, x, -1).values;
  Complex acc = 0.0;
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b) {
      const Complex k = g.point(a, b);
      const Complex es = e(a, b) * solver.s()(a, b);
      acc += -I * std::conj(k) * es * std::conj(mu(a, b)) + es * std::conj(dmu(a, b));
    }
  return I / M_PI * g.cell_area() * acc;
}

}  // namespace nvist
