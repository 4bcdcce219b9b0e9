#include <doctest.h>

#include "nvist/evolve.hpp"
#include "nvist/potentials.hpp"

using namespace nvist;

namespace {

// Real-q data on a small grid, computed once.
const ScatteringData& data() {
  static const ScatteringData sd = [] {
    const Grid2D g = make_grid(4.0, 64);
    return scattering_transform(conductivity_potential(g, PotentialSpec{}), make_kgrid(4.0, 16, 2, RaySpec{1e-2, 1e-1, 5, 0.3}));
  }();
  return sd;
}

double max_diff(const ComplexArray& a, const ComplexArray& b) { return (a - b).abs().maxCoeff(); }

}  // namespace

TEST_CASE("tau = 0 is the identity") {
  const ScatteringData e = evolve(data(), 0.0);
  CHECK(max_diff(e.t, data().t) == 0.0);
  CHECK(max_diff(e.s, data().s) == 0.0);
  CHECK(e.tau == 0.0);
}

TEST_CASE("phase is unimodular and the mask is kept") {
  const ScatteringData e = evolve(data(), 0.37);
  CHECK(max_diff(e.t.abs().cast<Complex>(), data().t.abs().cast<Complex>()) <= 1e-15);
  CHECK((e.mask == data().mask).all());
  CHECK(e.tau == 0.37);
  for (std::size_t i = 0; i < e.ray.size(); ++i) CHECK(std::abs(std::abs(e.ray[i].t) - std::abs(data().ray[i].t)) <= 1e-18);
}

TEST_CASE("k on the pi/6 ray does not move") {
  for (double r : {0.1, 1.0, 3.7}) {
    const Complex k = std::polar(r, M_PI / 6.0);
    CHECK(std::abs(nv_phase(k, 5.0) - 1.0) <= 1e-12);
  }
}

TEST_CASE("group law") {
  const ScatteringData a = evolve(evolve(data(), 0.03), 0.07);
  const ScatteringData b = evolve(data(), 0.1);
  const double scale = data().t.abs().maxCoeff();
  CHECK(max_diff(a.t, b.t) <= 1e-14 * scale);
  CHECK(a.tau == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("symmetry relation and X-norm are preserved") {
  const XNorm before = x_norm(data(), 1, 1.5, 0.1);
  const ScatteringData e = evolve(data(), 0.05);
  const XNorm after = x_norm(e, 1, 1.5, 0.1);
  CHECK(std::abs(after.symmetry_defect - before.symmetry_defect) <= 1e-14);
  CHECK(after.value == doctest::Approx(before.value).epsilon(1e-12));
  CHECK(std::abs(symmetry_defect(e) - symmetry_defect(data())) <= 1e-14);
}
