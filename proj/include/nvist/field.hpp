#pragma once

#include <vector>

#include "nvist/fft.hpp"
#include "nvist/grid.hpp"

namespace nvist {

enum class Derivative {
  d,       // symbol i*conj(zeta)/2
  dbar,    // symbol i*zeta/2
  d3,
  dbar3,
  dbar_d,  // symbol -|zeta|^2/4, Nyquist modes kept
};

/// Multiplies the DFT of f by symbol(zeta, i, j) and transforms back.
template <typename Symbol>
Field apply_symbol(const Field& f, Symbol&& symbol) {
  const Grid2D& g = f.grid;
  ComplexArray a = f.values;
  fft2(a);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) a(i, j) *= symbol(g.zeta(i, j), i, j);
  ifft2(a);
  return {g, std::move(a)};
}

Complex derivative_symbol(const Grid2D& g, int i, int j, Derivative which);
Field spectral_derivative(const Field& f, Derivative which);

/// Regularized far-field expansion T(z) = c0 + sum_m c_m ((1 - e^{-|z|^2/w^2}) / z)^m.
/// Subtracting it leaves a remainder that is smooth and periodic to high accuracy,
/// so slowly decaying fields can still be differentiated spectrally.
struct MultipoleTail {
  double width = 1.0;
  Complex constant{0.0, 0.0};
  std::vector<Complex> coeffs;

  Complex value(Complex z) const;
  Complex dbar(Complex z) const;
  Complex d(Complex z) const;
  Field sample(const Grid2D& g) const;
  bool empty() const { return coeffs.empty() && constant == Complex{}; }
};

/// Least-squares fit of a tail with `order` multipole terms plus a constant on the
/// outer frame max(|x1|,|x2|) >= frame * L. width <= 0 selects L/4.
MultipoleTail fit_multipole_tail(const Field& f, int order, double frame = 0.75,
                                 double width = 0.0);
/// Tail of Pf from the moments (1/pi) int z^j f.
MultipoleTail cauchy_tail(const Field& f, int order, double width = 0.0);

/// d or dbar of f taken as spectral(f - T) + exact derivative of T.
Field spectral_derivative(const Field& f, Derivative which, const MultipoleTail& tail);

/// Convolution with 1/(pi z) on the zero-padded doubled grid.
/// sampled: 1/(pi z) sampled on a doubled grid, kernel(0) = 0, central-cell correction.
/// truncated: 1/(pi z) cut at a radius covering the grid, applied through its exact
/// transform -2i (1 - J0(R|zeta|)) / zeta; spectrally accurate for resolved inputs.
enum class CauchyKernel { sampled, truncated };

class CauchyOperator {
 public:
  explicit CauchyOperator(const Grid2D& g, CauchyKernel kind = CauchyKernel::sampled);
  const Grid2D& grid() const { return grid_; }
  void apply(const ComplexArray& f, ComplexArray& out) const;
  Field apply(const Field& f) const;

 private:
  Grid2D grid_;
  CauchyKernel kind_;
  int pad_ = 0;
  ComplexArray kernel_hat_;
};

Field cauchy_transform(const Field& f);

/// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

/// exp(i * sign * 2 Re(k x)) on the grid.
Field pairing_factor(const Grid2D& g, Complex k, int sign);

/// Trigonometric interpolation onto a grid of the same half-width.
Field resample(const Field& f, const Grid2D& target);
Field resample(const Field& f, const Grid2D& target, const MultipoleTail& tail);

}  // namespace nvist
