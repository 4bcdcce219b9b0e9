#include <doctest.h>

#include <stdexcept>

#include "nvist/cgo.hpp"
#include "nvist/field.hpp"
#include "nvist/potentials.hpp"

using namespace nvist;

namespace {

Field critical(const Grid2D& g, double scale = 1.0) {
  Field q = conductivity_potential(g, PotentialSpec{});
  q.values *= scale;
  return q;
}

double ring_sup(const Field& f, double r_lo, double r_hi) {
  double s = 0.0;
  for (int i = 0; i < f.grid.n; ++i)
    for (int j = 0; j < f.grid.n; ++j) {
      const Complex x = f.grid.point(i, j);
      const double r = std::abs(x);
      if (r >= r_lo && r <= r_hi) s = std::max(s, std::abs(f.values(i, j)));
    }
  return s;
}

}  // namespace

TEST_CASE("Faddeev multiplier inverts dbar(d + ik)") {
  const Grid2D g = make_grid(4.0, 256);
  const Complex k(1.0, 0.5);
  const FaddeevMultiplier m = faddeev_multiplier(g, k);
  CHECK(m.values.allFinite());
  const Field f = Field::sample(g, [](Complex x) { return std::exp(-4.0 * std::norm(x)) * (1.0 + x); });
  const Field back = faddeev_operator(apply_multiplier(m, f), m.k);
  CHECK(relative_sup_error(back, f) <= 1e-8);
  CHECK(apply_multiplier(m, Field(g)).sup() == 0.0);
}

TEST_CASE("multiplier stays finite when -2 conj(k) would hit the lattice") {
  const Grid2D g = make_grid(4.0, 64);
  // -2 conj(k) = (pi/2L)(1 + i) is the first point of the shifted lattice
  const FaddeevMultiplier hit = faddeev_multiplier(g, Complex(-M_PI / 16.0, M_PI / 16.0));
  CHECK(hit.snapped);
  CHECK(hit.values.allFinite());
  const FaddeevMultiplier miss = faddeev_multiplier(g, Complex(0.3, -0.7));
  CHECK(!miss.snapped);
  CHECK(miss.values.allFinite());
}

TEST_CASE("zero potential gives mu = 1") {
  const Grid2D g = make_grid(4.0, 64);
  const CGOResult r = solve_cgo(Field(g), Complex(1.0, 0.0));
  CHECK(r.mu.values.isApproxToConstant(Complex(1.0, 0.0)));
  CHECK(r.residual == 0.0);
  CHECK(r.iterations == 0);
  CHECK(!r.exceptional);
  CHECK(r.t == Complex{});
}

TEST_CASE("k = 0 is a domain error") {
  const Grid2D g = make_grid(4.0, 64);
  CHECK_THROWS_AS(solve_cgo(critical(g), Complex{}), std::domain_error);
}

TEST_CASE("conductivity potential at k = 1 is regular") {
  const Grid2D g = make_grid(4.0, 128);
  const CGOResult r = solve_cgo(critical(g), Complex(1.0, 0.0));
  CHECK(!r.exceptional);
  CHECK(r.residual <= 1e-8);
  CHECK(r.mu.all_finite());
}

TEST_CASE("weak potential: t is the Born term") {
  const Grid2D g = make_grid(4.0, 64);
  const Field q = critical(g, 1e-3);
  const CgoSolver solver(q);
  double worst = 0.0, tmax = 0.0;
  for (Complex k : {Complex(0.5, 0.2), Complex(-1.0, 0.7), Complex(2.0, -1.5), Complex(0.1, 0.1)}) {
    const Complex t = solver.solve(k, false).t;
    const Complex born = integrate(Field(g, pairing_factor(g, k, 1).values * q.values));
    worst = std::max(worst, std::abs(t - born));
    tmax = std::max(tmax, std::abs(t));
  }
  CHECK(worst <= 0.05 * tmax);
}

TEST_CASE("mu depends continuously on q") {
  const Grid2D g = make_grid(4.0, 64);
  const Field q = critical(g);
  const Field b = bump(g, Complex(0.3, -0.2), 0.7);
  const Complex k(0.8, -0.4);
  const Field mu = solve_cgo(q, k).mu;
  double prev = 1e300;
  for (double d : {1e-1, 1e-2, 1e-3}) {
    const double diff = sup_distance(solve_cgo(perturb(q, b, d), k).mu, mu);
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("mu - 1 decays toward the grid boundary") {
  const Grid2D g = make_grid(4.0, 128);
  const Field q = critical(g);
  for (Complex k : {Complex(1.0, 0.0), Complex(1.0, 0.5), Complex(3.0, 1.0)}) {
    const Field m1(g, solve_cgo(q, k).mu.values - 1.0);
    CHECK(ring_sup(m1, 3.5, 4.0) <= 0.1 * ring_sup(m1, 0.0, 1.5));
  }
}

TEST_CASE("supercritical example: mu blows up near a ring of small |k|") {
  const Grid2D g = make_grid(4.0, 128);
  PotentialSpec spec;
  spec.family = PotentialFamily::perturbed;
  spec.epsilon = -0.5;
  const CgoSolver solver(make_potential(g, spec));
  double worst = 0.0;
  for (double r = 0.02; r < 0.1; r *= 1.1) worst = std::max(worst, solver.solve(Complex(r, 0.0), false).mu_sup_dev);
  const double regular = solver.solve(Complex(1.0, 0.0), false).mu_sup_dev;
  CHECK(worst > 10.0 * regular);
}
