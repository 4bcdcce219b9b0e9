#include "nvist/grid.hpp"

#include <cmath>

#include "nvist/errors.hpp"

namespace nvist {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid2D make_grid(double L, int n, GridKind kind) {
  if (!(L > 0.0)) throw ConfigError("grid half-width L must be positive");
  if (n < 16 || !is_power_of_two(n))
    throw ConfigError("grid size n must be a power of two >= 16, got " + std::to_string(n));
  return Grid2D{L, n, kind};
}

std::string to_string(GridKind kind) { return kind == GridKind::x ? "x" : "k"; }

GridKind grid_kind_from_string(const std::string& s) {
  if (s == "x") return GridKind::x;
  if (s == "k") return GridKind::k;
  throw ConfigError("unknown grid kind '" + s + "'");
}

double sup_distance(const Field& a, const Field& b) { return (a.values - b.values).abs().maxCoeff(); }

double relative_sup_error(const Field& a, const Field& b) {
  const double d = sup_distance(a, b);
  const double s = b.sup();
  return s > 0.0 ? d / s : d;
}

Complex integrate(const Field& f) { return f.values.sum() * f.grid.cell_area(); }

Field real_part(const Field& f) { return {f.grid, f.values.real().cast<Complex>()}; }

Grid2D widened(const Grid2D& g, int factor) {
  if (factor < 1 || !is_power_of_two(factor)) throw ConfigError("widening factor must be a power of two");
  return make_grid(factor * g.L, factor * g.n, g.kind);
}

Field embed(const Field& f, int factor) {
  Field out(widened(f.grid, factor));
  const int off = (out.grid.n - f.grid.n) / 2;
  out.values.block(off, off, f.grid.n, f.grid.n) = f.values;
  return out;
}

Field crop(const Field& f, const Grid2D& target) {
  const int off = (f.grid.n - target.n) / 2;
  if (off < 0 || std::abs(f.grid.h() - target.h()) > 1e-12 * target.h() || 2 * off + target.n != f.grid.n)
    throw ConfigError("crop target is not a centred block of the source grid");
  return {target, f.values.block(off, off, target.n, target.n)};
}

}  // namespace nvist
