#include "nvist/field.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "nvist/errors.hpp"

namespace nvist {

Complex derivative_symbol(const Grid2D& g, int i, int j, Derivative which) {
  const Complex I{0.0, 1.0};
  const Complex z = g.zeta(i, j);
  if (which == Derivative::dbar_d) return -std::norm(z) / 4.0;
  if (g.is_nyquist(i) || g.is_nyquist(j)) return 0.0;
  switch (which) {
    case Derivative::d: return I * std::conj(z) / 2.0;
    case Derivative::dbar: return I * z / 2.0;
    case Derivative::d3: return std::pow(I * std::conj(z) / 2.0, 3);
    case Derivative::dbar3: return std::pow(I * z / 2.0, 3);
    default: return 0.0;
  }
}

Field spectral_derivative(const Field& f, Derivative which) {
  const Grid2D& g = f.grid;
  return apply_symbol(f, [&](Complex, int i, int j) { return derivative_symbol(g, i, j, which); });
}

// ---- multipole tails -------------------------------------------------------

namespace {

struct TailTerms {
  double one_minus_e;  // 1 - exp(-|z|^2/w^2)
  double e;
};

TailTerms tail_terms(Complex z, double w) {
  const double r2 = std::norm(z) / (w * w);
  return {-std::expm1(-r2), std::exp(-r2)};
}

}  // namespace

Complex MultipoleTail::value(Complex z) const {
  Complex v = constant;
  if (z == Complex{}) return v;
  const auto t = tail_terms(z, width);
  const Complex base = t.one_minus_e / z;
  Complex p = 1.0;
  for (const Complex& c : coeffs) {
    p *= base;
    v += c * p;
  }
  return v;
}

Complex MultipoleTail::dbar(Complex z) const {
  const double w2 = width * width;
  if (z == Complex{}) return coeffs.empty() ? 0.0 : coeffs[0] / w2;
  const auto t = tail_terms(z, width);
  // dbar phi_m = (m E / w^2) (1 - E)^{m-1} z^{1-m}
  const Complex base = t.one_minus_e / z;
  Complex v = 0.0;
  Complex p = 1.0;  // base^{m-1}
  for (size_t k = 0; k < coeffs.size(); ++k) {
    const double m = static_cast<double>(k + 1);
    v += coeffs[k] * (m * t.e / w2) * p;
    p *= base;
  }
  return v;
}

Complex MultipoleTail::d(Complex z) const {
  if (z == Complex{}) return 0.0;
  const double w2 = width * width;
  const auto t = tail_terms(z, width);
  const Complex base = t.one_minus_e / z;
  // d phi_m = m base^{m-1} * (E conj(z)/w^2 - (1 - E)/z) / z
  const Complex inner = (t.e * std::conj(z) / w2 - t.one_minus_e / z) / z;
  Complex v = 0.0;
  Complex p = 1.0;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    const double m = static_cast<double>(k + 1);
    v += coeffs[k] * m * p * inner;
    p *= base;
  }
  return v;
}

Field MultipoleTail::sample(const Grid2D& g) const {
  return Field::sample(g, [&](Complex z) { return value(z); });
}

MultipoleTail fit_multipole_tail(const Field& f, int order, double frame, double width) {
  const Grid2D& g = f.grid;
  MultipoleTail tail;
  tail.width = width > 0.0 ? width : g.L / 4.0;
  const double edge = frame * g.L;
  std::vector<std::pair<int, int>> pts;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (std::max(std::abs(g.coord(i)), std::abs(g.coord(j))) >= edge) pts.emplace_back(i, j);

  Eigen::MatrixXcd A(pts.size(), order + 1);
  Eigen::VectorXcd b(pts.size());
  MultipoleTail unit;
  unit.width = tail.width;
  for (size_t r = 0; r < pts.size(); ++r) {
    const auto [i, j] = pts[r];
    const Complex z = g.point(i, j);
    const auto t = tail_terms(z, tail.width);
    const Complex base = t.one_minus_e / z;
    A(r, 0) = 1.0;
    Complex p = 1.0;
    for (int m = 1; m <= order; ++m) {
      p *= base;
      A(r, m) = p;
    }
    b(r) = f.values(i, j);
  }
  const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
  tail.constant = c(0);
  tail.coeffs.assign(c.data() + 1, c.data() + 1 + order);
  return tail;
}

MultipoleTail cauchy_tail(const Field& f, int order, double width) {
  const Grid2D& g = f.grid;
  MultipoleTail tail;
  tail.width = width > 0.0 ? width : g.L / 4.0;
  tail.coeffs.assign(order, Complex{});
  const double w = g.cell_area() / M_PI;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const Complex z = g.point(i, j);
      Complex p = w * f.values(i, j);
      for (int m = 0; m < order; ++m) {
        tail.coeffs[m] += p;
        p *= z;
      }
    }
  return tail;
}

Field spectral_derivative(const Field& f, Derivative which, const MultipoleTail& tail) {
  if (which != Derivative::d && which != Derivative::dbar)
    throw ConfigError("tail-aware derivative supports d and dbar only");
  const Grid2D& g = f.grid;
  Field out = spectral_derivative(f - tail.sample(g), which);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const Complex z = g.point(i, j);
      out.values(i, j) += which == Derivative::d ? tail.d(z) : tail.dbar(z);
    }
  return out;
}

// ---- Cauchy transform ------------------------------------------------------

CauchyOperator::CauchyOperator(const Grid2D& g, CauchyKernel kind) : grid_(g), kind_(kind) {
  const int n = g.n;
  const double h = g.h();
  if (kind == CauchyKernel::truncated) {
    // images of the box under the period 2L + R never reach the box
    const double R = 2.0 * std::sqrt(2.0) * g.L + h;
    const int N = fft_friendly_size(n + static_cast<int>(std::ceil(R / h)));
    pad_ = N;
    kernel_hat_ = ComplexArray::Zero(N, N);
    const double dxi = 2.0 * M_PI / (N * h);
    for (int p = 0; p < N; ++p)
      for (int q = 0; q < N; ++q) {
        const int mp = p < N / 2 ? p : p - N;
        const int mq = q < N / 2 ? q : q - N;
        if ((mp == 0 && mq == 0) || 2 * mp == -N || 2 * mq == -N) continue;
        const Complex zeta(mp * dxi, mq * dxi);
        kernel_hat_(p, q) = Complex(0.0, -2.0) * (1.0 - std::cyl_bessel_j(0.0, R * std::abs(zeta))) / zeta;
      }
    return;
  }
  const int N = 2 * n;
  pad_ = N;
  kernel_hat_ = ComplexArray::Zero(N, N);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) {
      const int dp = p < n ? p : p - N;
      const int dq = q < n ? q : q - N;
      if (dp == 0 && dq == 0) continue;
      kernel_hat_(p, q) = h * h / (M_PI * Complex(dp * h, dq * h));
    }
  fft2(kernel_hat_);
}

void CauchyOperator::apply(const ComplexArray& f, ComplexArray& out) const {
  const int n = grid_.n, N = pad_;
  const double h = grid_.h();
  ComplexArray pad = ComplexArray::Zero(N, N);
  pad.topLeftCorner(n, n) = f;
  fft2(pad);
  pad *= kernel_hat_;
  ifft2(pad);
  out = pad.topLeftCorner(n, n);
  if (kind_ == CauchyKernel::truncated) return;
  // The excluded central cell contributes -(h^2/pi) d f to leading order.
  const double c = h * h / M_PI;
  auto at = [&](int i, int j) -> Complex {
    return (i < 0 || j < 0 || i >= n || j >= n) ? Complex{} : f(i, j);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex d1 = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
      const Complex d2 = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
      out(i, j) -= c * 0.5 * (d1 - Complex(0.0, 1.0) * d2);
    }
}

Field CauchyOperator::apply(const Field& f) const {
  Field out(grid_);
  apply(f.values, out.values);
  return out;
}

Field cauchy_transform(const Field& f) { return CauchyOperator(f.grid).apply(f); }

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

Field pairing_factor(const Grid2D& g, Complex k, int sign) {
  return Field::sample(g, [&](Complex x) {
    const double phase = sign * 2.0 * (k * x).real();
    return Complex(std::cos(phase), std::sin(phase));
  });
}

// ---- resampling ------------------------------------------------------------

Field resample(const Field& f, const Grid2D& target) {
  if (target.L != f.grid.L) throw ConfigError("resample requires grids of equal half-width");
  const int ns = f.grid.n, nt = target.n;
  if (ns == nt) return Field(target, f.values);
  ComplexArray src = f.values;
  fft2(src);
  ComplexArray dst = ComplexArray::Zero(nt, nt);
  const int half = std::min(ns, nt) / 2;  // modes |m| < half, Nyquist of the smaller grid dropped
  auto wrap = [](int m, int n) { return m < 0 ? m + n : m; };
  for (int a = -half + 1; a < half; ++a)
    for (int b = -half + 1; b < half; ++b)
      dst(wrap(a, nt), wrap(b, nt)) = src(wrap(a, ns), wrap(b, ns));
  dst *= static_cast<double>(nt) * nt / (static_cast<double>(ns) * ns);
  ifft2(dst);
  return {target, std::move(dst)};
}

Field resample(const Field& f, const Grid2D& target, const MultipoleTail& tail) {
  return resample(f - tail.sample(f.grid), target) + tail.sample(target);
}

}  // namespace nvist

#include "nvist/convolution.hpp"

namespace nvist {

IndexBox support_box(const Field& f, double rel_tol, int margin) {
  const int n = f.grid.n;
  const double cut = rel_tol * f.sup();
  int i0 = n, i1 = -1, j0 = n, j1 = -1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(f.values(i, j)) > cut) {
        i0 = std::min(i0, i);
        i1 = std::max(i1, i);
        j0 = std::min(j0, j);
        j1 = std::max(j1, j);
      }
  if (i1 < 0) return {0, 0, 0, 0};
  i0 = std::max(0, i0 - margin);
  j0 = std::max(0, j0 - margin);
  i1 = std::min(n - 1, i1 + margin);
  j1 = std::min(n - 1, j1 + margin);
  return {i0, j0, i1 - i0 + 1, j1 - j0 + 1};
}

}  // namespace nvist
