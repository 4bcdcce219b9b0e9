#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>

namespace nvist {

using Complex = std::complex<double>;

/// Row-major complex samples; row index i walks x1 (or k1), column j walks x2.
template <typename Scalar>
using GridArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexArray = GridArray<Complex>;
using RealArray = GridArray<double>;

enum class GridKind { x, k };

/// Square periodic lattice on [-L, L)^2 with n samples per axis.
struct Grid2D {
  double L = 1.0;
  int n = 16;
  GridKind kind = GridKind::x;

  double h() const { return 2.0 * L / n; }
  double coord(int i) const { return -L + i * h(); }
  Complex point(int i, int j) const { return {coord(i), coord(j)}; }
  /// Angular frequency of FFT index i (period 2L).
  double frequency(int i) const {
    const int m = i < n / 2 ? i : i - n;
    return M_PI / L * m;
  }
  Complex zeta(int i, int j) const { return {frequency(i), frequency(j)}; }
  bool is_nyquist(int i) const { return i == n / 2; }
  double cell_area() const { return h() * h(); }

  bool operator==(const Grid2D& o) const { return L == o.L && n == o.n && kind == o.kind; }
};

Grid2D make_grid(double L, int n, GridKind kind = GridKind::x);
bool is_power_of_two(int n);
std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& s);

/// Complex samples of a function on a Grid2D.
struct Field {
  Grid2D grid;
  ComplexArray values;

  Field() = default;
  explicit Field(const Grid2D& g) : grid(g), values(ComplexArray::Zero(g.n, g.n)) {}
  Field(const Grid2D& g, ComplexArray v) : grid(g), values(std::move(v)) {}

  static Field constant(const Grid2D& g, Complex c) {
    return Field(g, ComplexArray::Constant(g.n, g.n, c));
  }
  /// Samples f(x) at every lattice point.
  template <typename F>
  static Field sample(const Grid2D& g, F&& f) {
    Field out(g);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) out.values(i, j) = f(g.point(i, j));
    return out;
  }

  int n() const { return grid.n; }
  double sup() const { return values.abs().maxCoeff(); }
  bool all_finite() const { return values.allFinite(); }
};

inline Field operator+(const Field& a, const Field& b) { return {a.grid, a.values + b.values}; }
inline Field operator-(const Field& a, const Field& b) { return {a.grid, a.values - b.values}; }
inline Field operator*(Complex c, const Field& a) { return {a.grid, c * a.values}; }

/// sup|a - b|
double sup_distance(const Field& a, const Field& b);
/// sup|a - b| / sup|b|, or sup|a - b| when b vanishes.
double relative_sup_error(const Field& a, const Field& b);
/// h^2 * sum of samples.
Complex integrate(const Field& f);
Field real_part(const Field& f);

/// Grid of the same spacing with `factor` times the half-width and the original points at its centre.
Grid2D widened(const Grid2D& g, int factor);
/// Zero-padded copy of f on widened(f.grid, factor).
Field embed(const Field& f, int factor);
/// Central block of f on target; target must share f's spacing and sit centred in it.
Field crop(const Field& f, const Grid2D& target);

}  // namespace nvist
