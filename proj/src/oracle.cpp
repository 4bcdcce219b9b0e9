#include "nvist/oracle.hpp"

#include <cmath>
#include <sstream>

#include "nvist/errors.hpp"
#include "nvist/fft.hpp"

namespace nvist {

namespace {

// -i (zeta^3 + conj(zeta)^3) / 8, zero on the Nyquist lines like the d3 and dbar3 symbols
ComplexArray linear_symbol(const Grid2D& g) {
  ComplexArray s(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const Complex z = g.zeta(i, j);
      s(i, j) = (g.is_nyquist(i) || g.is_nyquist(j)) ? Complex{}
                                                      : Complex(0.0, -0.25 * std::real(z * z * z));
    }
  return s;
}

}  // namespace

Field linear_solution(const Field& q0, double tau) {
  ComplexArray v = q0.values;
  fft2(v);
  v *= (tau * linear_symbol(q0.grid)).exp();
  ifft2(v);
  return {q0.grid, std::move(v)};
}

double max_stable_dt(const Grid2D& g) { return 0.5 * std::pow(g.h() / M_PI, 3) * 8.0; }

int default_steps(const Grid2D& g, double tau) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(tau) / max_stable_dt(g) - 1e-9)));
}

Field step_nv(const Field& q0, double tau, int steps, const StepOptions& opt) {
  const Grid2D& g = q0.grid;
  const int n = g.n;
  if (steps <= 0) steps = default_steps(g, tau);
  const double dt = tau / steps;
  if (opt.enforce_dt_rule && std::abs(dt) > max_stable_dt(g) * (1.0 + 1e-12))
    throw ConfigError("oracle step " + std::to_string(dt) + " exceeds the stability bound " +
                      std::to_string(max_stable_dt(g)));

  const ComplexArray lin = linear_symbol(g);
  const ComplexArray E = (dt * lin).exp(), E2 = (0.5 * dt * lin).exp();
  ComplexArray sym_d(n, n), sym_db(n, n), to_u(n, n), keep(n, n);
  const int cut = n / 3;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex z = g.zeta(i, j);
      const int mi = i < n / 2 ? i : i - n, mj = j < n / 2 ? j : j - n;
      const bool kept = std::abs(mi) <= cut && std::abs(mj) <= cut;
      keep(i, j) = kept ? 1.0 : 0.0;
      sym_d(i, j) = Complex(0.0, 0.5) * std::conj(z);
      sym_db(i, j) = Complex(0.0, 0.5) * z;
      to_u(i, j) = z == Complex{} ? Complex{} : std::conj(z) / z;
    }

  // -3 dbar(conj(u) q) - 3 d(u q), dealiased, in Fourier space
  ComplexArray qx(n, n), ux(n, n), a(n, n), b(n, n);
  auto nonlinear = [&](const ComplexArray& qh) -> ComplexArray {
    qx = qh * keep;
    ux = qx * to_u;
    ifft2(qx);
    ifft2(ux);
    a = ux.conjugate() * qx;
    b = ux * qx;
    fft2(a);
    fft2(b);
    return (-3.0 * (sym_db * a + sym_d * b)) * keep;
  };

  ComplexArray qh = q0.values.real().cast<Complex>();
  fft2(qh);
  ComplexArray phys(n, n);
  for (int step = 0; step < steps; ++step) {
    const ComplexArray k1 = nonlinear(qh);
    const ComplexArray k2 = nonlinear(E2 * (qh + 0.5 * dt * k1));
    const ComplexArray k3 = nonlinear(E2 * qh + 0.5 * dt * k2);
    const ComplexArray k4 = nonlinear(E * qh + dt * E2 * k3);
    qh = E * qh + (dt / 6.0) * (E * k1 + 2.0 * E2 * (k2 + k3) + k4);

    phys = qh;
    ifft2(phys);
    const double re = phys.real().abs().maxCoeff();
    const double im = phys.imag().abs().maxCoeff();
    if (!std::isfinite(re) || !std::isfinite(im) || im > opt.imag_tol * re) {
      std::ostringstream os;
      os << "NV integration lost reality at step " << step + 1 << " of " << steps << " (tau " << (step + 1) * dt
         << "): max|Im q| " << im << ", max|Re q| " << re;
      throw NumericalError("oracle", os.str());
    }
    qh = phys.real().cast<Complex>();
    fft2(qh);
  }
  ifft2(qh);
  return {g, qh.real().cast<Complex>()};
}

Field linear_solution_padded(const Field& q0, double tau, int factor) {
  return crop(linear_solution(embed(q0, factor), tau), q0.grid);
}

Field step_nv_padded(const Field& q0, double tau, int factor, const StepOptions& opt) {
  return crop(step_nv(embed(q0, factor), tau, 0, opt), q0.grid);
}

}  // namespace nvist
