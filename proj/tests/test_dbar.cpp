#include <doctest.h>

#include <Eigen/Dense>

#include "nvist/cgo.hpp"
#include "nvist/dbar.hpp"
#include "nvist/evolve.hpp"
#include "nvist/potentials.hpp"

using namespace nvist;

namespace {

const Grid2D kX = make_grid(4.0, 64);

const Field& potential() {
  static const Field q = conductivity_potential(kX, PotentialSpec{});
  return q;
}

const ScatteringData& data() {
  static const ScatteringData sd = scattering_transform(potential(), make_kgrid(6.0, 32));
  return sd;
}

// s = t / (pi conj k) with t(k) = 0.3 |k|^2 exp(-|k|^2 / 2)(1 + 0.3 i k1): smooth, and
// t(k) = conj t(-k), so the data carry the symmetry of real potentials.
ScatteringData smooth_data() {
  ScatteringData sd = empty_scattering_data(make_kgrid(6.0, 64));
  for (int a = 0; a < sd.kgrid.m; ++a)
    for (int b = 0; b < sd.kgrid.m; ++b) {
      const Complex k = sd.kgrid.point(a, b);
      sd.mask(a, b) = kData;
      sd.t(a, b) = 0.3 * std::norm(k) * std::exp(-0.5 * std::norm(k)) * Complex(1.0, 0.3 * k.real());
      sd.s(a, b) = 0.3 * k * std::exp(-0.5 * std::norm(k)) * Complex(1.0, 0.3 * k.real()) / M_PI;
    }
  return sd;
}

Field random_field(const Grid2D& g, unsigned seed) {
  std::srand(seed);
  return Field(g, ComplexArray::Random(g.n, g.n));
}

}  // namespace

TEST_CASE("T vanishes on zero input and zero data") {
  const Grid2D kg = data().kgrid.grid();
  CHECK(apply_T(data(), Complex(0.3, 0.1), Field(kg)).sup() == 0.0);
  const ScatteringData zero = empty_scattering_data(data().kgrid);
  CHECK(apply_T(zero, Complex(0.3, 0.1), random_field(kg, 3)).sup() == 0.0);
}

TEST_CASE("T is real-linear: T(alpha f) = conj(alpha) T(f)") {
  const Grid2D kg = data().kgrid.grid();
  const DbarSolver solver(data());
  const Field f = random_field(kg, 7);
  const Complex x(0.4, -0.7);
  const Field Tf = solver.apply_T(x, f);
  for (Complex alpha : {Complex(0, 1), Complex(2.0, -0.5), Complex(-1.3, 0.0)}) {
    const Field Taf = solver.apply_T(x, Field(kg, alpha * f.values));
    CHECK((Taf.values - std::conj(alpha) * Tf.values).abs().maxCoeff() <= 1e-12 * Tf.sup());
  }
}

TEST_CASE("zero data: mu = 1 and a1 = a2 = 0") {
  const DbarResult r = solve_mu(empty_scattering_data(data().kgrid), Complex(0.5, 0.5));
  CHECK(r.mu_k.values.isApproxToConstant(Complex(1.0, 0.0)));
  CHECK(r.a1 == Complex{});
  CHECK(r.a2 == Complex{});
  CHECK(r.iterations == 0);
}

TEST_CASE("d-bar residual on smooth data") {
  const ScatteringData sd = smooth_data();
  const DbarSolver solver(sd);
  for (Complex x : {Complex(0, 0), Complex(0.5, 0.25), Complex(2.0, 1.0)}) {
    const DbarResult r = solver.solve_with_mu(x);
    CHECK(r.residual <= 1e-8);
    CHECK(dbar_residual(solver, r) <= 1e-4);
  }
}

TEST_CASE("iteration counts are uniform over a 5 x 5 set of (x, tau)") {
  int worst = 0;
  for (double tau : {0.0, 0.025, 0.05, 0.075, 0.1}) {
    const DbarSolver solver(evolve(data(), tau));
    for (Complex x : {Complex(0, 0), Complex(1, 0), Complex(-0.5, 1.5), Complex(2.5, -2.5), Complex(-3.5, 3.0)}) {
      const DbarResult r = solver.solve(x);
      worst = std::max(worst, r.iterations);
    }
  }
  CHECK(worst < DbarOptions{}.max_iter);
  MESSAGE("max iterations " << worst);
}

TEST_CASE("a1 from the moment agrees with the large-k behaviour of mu") {
  const DbarSolver solver(data());
  const KGrid& kg = data().kgrid;
  // a1 vanishes at the centre of a radial potential, so sample off-centre
  for (Complex x : {Complex(0.8, 0.2), Complex(0.3, -0.4)}) {
    const DbarResult r = solver.solve_with_mu(x);
    // (mu - 1) k = a1 + a2 / k + c / k^2 on 0.7 k_max <= |k| <= 0.9 k_max
    std::vector<Complex> ks, ys;
    for (int a = 0; a < kg.m; ++a)
      for (int b = 0; b < kg.m; ++b) {
        const Complex k = kg.point(a, b);
        const double rk = std::abs(k);
        if (rk < 0.7 * kg.k_max || rk > 0.9 * kg.k_max) continue;
        ks.push_back(k);
        ys.push_back((r.mu_k.values(a, b) - 1.0) * k);
      }
    Eigen::MatrixXcd A(ks.size(), 3);
    Eigen::VectorXcd y(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = 1.0 / ks[i];
      A(i, 2) = 1.0 / (ks[i] * ks[i]);
      y(i) = ys[i];
    }
    const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(y);
    CHECK(std::abs(c(0) - r.a1) <= 0.1 * std::abs(r.a1));
  }
}

TEST_CASE("mu from the d-bar problem matches the CGO solution at tau = 0") {
  const DbarSolver solver(data());
  const KGrid& kg = data().kgrid;
  const CgoSolver cgo(potential());
  for (auto [i, j] : {std::pair{32, 32}, std::pair{40, 28}}) {
    const Complex x = kX.point(i, j);
    const DbarResult r = solver.solve_with_mu(x);
    double diff = 0.0, scale = 0.0, dev = 0.0;
    for (int a = 0; a < kg.m; ++a)
      for (int b = 0; b < kg.m; ++b) {
        const Complex k = kg.point(a, b);
        if (std::abs(k) < 1.0 || std::abs(k) > 0.5 * kg.k_max) continue;
        const Complex mu = cgo.solve(k).mu.values(i, j);
        diff = std::max(diff, std::abs(r.mu_k.values(a, b) - mu));
        scale = std::max(scale, std::abs(mu));
        dev = std::max(dev, std::abs(mu - 1.0));
      }
    CHECK(diff <= 0.05 * scale);
    MESSAGE("sup|mu_dbar - mu_cgo| = " << diff << ", sup|mu_cgo - 1| = " << dev);
  }
}
