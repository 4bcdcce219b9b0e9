#include "nvist/evolve.hpp"

namespace nvist {

Complex nv_phase(Complex k, double tau) {
  // k^3 + conj(k)^3 = 2 Re(k^3)
  return std::polar(1.0, tau * 2.0 * (k * k * k).real());
}

ScatteringData evolve(const ScatteringData& sd, double tau) {
  ScatteringData out = sd;
  const KGrid& kg = sd.kgrid;
  for (int a = 0; a < kg.m; ++a)
    for (int b = 0; b < kg.m; ++b) {
      if (sd.mask(a, b) != kData) continue;
      const Complex p = nv_phase(kg.point(a, b), tau);
      out.t(a, b) *= p;
      out.s(a, b) *= p;
    }
  for (auto& r : out.ray) r.t *= nv_phase(r.k, tau);
  out.tau = sd.tau + tau;
  return out;
}

}  // namespace nvist
