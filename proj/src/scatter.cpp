#include "nvist/scatter.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nvist/errors.hpp"
#include "nvist/parallel.hpp"

namespace nvist {

std::vector<Complex> KGrid::ray_points() const {
  std::vector<Complex> pts;
  if (ray.count <= 0) return pts;
  const Complex dir = std::polar(1.0, ray.angle);
  if (ray.count == 1) return {ray.k_lo * dir};
  const double step = std::log(ray.k_hi / ray.k_lo) / (ray.count - 1);
  for (int i = 0; i < ray.count; ++i) pts.push_back(ray.k_lo * std::exp(step * i) * dir);
  return pts;
}

KGrid make_kgrid(double k_max, int m, int k_min_cells, RaySpec ray) {
  if (!(k_max > 0.0)) throw ConfigError("k_max must be positive");
  if (m < 16 || m % 2 != 0) throw ConfigError("k-grid size m must be even and >= 16");
  if (k_min_cells < 2) throw ConfigError("k_min_cells must be at least 2");
  KGrid kg{k_max, m, k_min_cells, ray};
  if (kg.k_min() >= k_max) throw ConfigError("excluded disk covers the whole k-grid");
  if (ray.count > 0 && !(ray.k_lo > 0.0 && ray.k_hi > ray.k_lo))
    throw ConfigError("small-k ray needs 0 < k_lo < k_hi");
  return kg;
}

int ScatteringData::exceptional_count() const {
  int c = static_cast<int>((mask == kExceptional).count());
  for (const auto& r : ray) c += r.exceptional;
  return c;
}

ScatteringData empty_scattering_data(const KGrid& kg) {
  ScatteringData sd;
  sd.kgrid = kg;
  sd.t = ComplexArray::Zero(kg.m, kg.m);
  sd.s = ComplexArray::Zero(kg.m, kg.m);
  sd.mask = MaskArray::Constant(kg.m, kg.m, kExcluded);
  for (int a = 0; a < kg.m; ++a)
    for (int b = 0; b < kg.m; ++b)
      if (kg.in_band(kg.point(a, b))) sd.mask(a, b) = kData;
  for (Complex k : kg.ray_points()) sd.ray.push_back({k});
  return sd;
}

void refresh_s(ScatteringData& sd) {
  const KGrid& kg = sd.kgrid;
  for (int a = 0; a < kg.m; ++a)
    for (int b = 0; b < kg.m; ++b) {
      if (sd.mask(a, b) != kData) {
        sd.t(a, b) = 0.0;
        sd.s(a, b) = 0.0;
      } else {
        sd.s(a, b) = sd.t(a, b) / (M_PI * std::conj(kg.point(a, b)));
      }
    }
}

ScatteringData scattering_transform(const Field& q, const KGrid& kg, const ForwardOptions& opt) {
  ScatteringData sd = empty_scattering_data(kg);
  const CgoSolver solver(q, opt.cgo);

  std::vector<std::pair<int, int>> cells;
  for (int a = 0; a < kg.m; ++a)
    for (int b = 0; b < kg.m; ++b)
      if (sd.mask(a, b) == kData) cells.emplace_back(a, b);
  const int ncell = static_cast<int>(cells.size());
  const int nray = static_cast<int>(sd.ray.size());
  std::vector<CGOResult> out(ncell + nray);
  parallel_for(ncell + nray, opt.workers, [&](int i) {
    const Complex k = i < ncell ? kg.point(cells[i].first, cells[i].second) : sd.ray[i - ncell].k;
    out[i] = solver.solve(k, false);
  });

  for (int i = 0; i < ncell; ++i) {
    const auto [a, b] = cells[i];
    sd.max_iterations = std::max(sd.max_iterations, out[i].iterations);
    if (out[i].exceptional) {
      sd.mask(a, b) = kExceptional;
    } else {
      sd.t(a, b) = out[i].t;
    }
  }
  for (int i = 0; i < nray; ++i) {
    const CGOResult& r = out[ncell + i];
    sd.ray[i] = {r.k, r.t, r.exceptional, r.mu_sup_dev, r.iterations};
  }
  if (opt.refine_rings && nray >= 3) sd.rings = refine_exceptional_rings(solver, sd.ray);
  refresh_s(sd);
  return sd;
}

std::vector<ExceptionalRing> refine_exceptional_rings(const CgoSolver& solver, std::vector<RaySample>& ray) {
  std::vector<ExceptionalRing> rings;
  std::vector<RaySample> extra;
  const double threshold = solver.options().blowup_threshold;
  const Complex dir = ray.empty() ? Complex(1.0) : ray.front().k / std::abs(ray.front().k);
  for (const auto& s : ray)
    if (s.exceptional) rings.push_back({std::abs(s.k), s.mu_sup_dev});
  for (size_t i = 1; i + 1 < ray.size(); ++i) {
    const RaySample &l = ray[i - 1], &c = ray[i], &r = ray[i + 1];
    if (c.exceptional || l.exceptional || r.exceptional) continue;
    if (!(c.mu_sup_dev > l.mu_sup_dev && c.mu_sup_dev > r.mu_sup_dev)) continue;
    // golden-section search for the maximum of sup|mu - 1| on log|k|
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(std::abs(l.k)), b = std::log(std::abs(r.k));
    auto probe = [&](double s) { return solver.solve(std::exp(s) * dir, false); };
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    CGOResult f1 = probe(x1), f2 = probe(x2);
    CGOResult best = f1.mu_sup_dev > f2.mu_sup_dev ? f1 : f2;
    for (int it = 0; it < 80 && !best.exceptional && (b - a) > 1e-14; ++it) {
      if (f1.mu_sup_dev > f2.mu_sup_dev) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = probe(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = probe(x2);
      }
      for (const CGOResult* f : {&f1, &f2})
        if (f->exceptional || f->mu_sup_dev > best.mu_sup_dev) best = *f;
    }
    if (best.exceptional || best.mu_sup_dev > threshold) {
      rings.push_back({std::abs(best.k), best.mu_sup_dev});
      extra.push_back({best.k, Complex{}, true, best.mu_sup_dev, best.iterations});
    }
  }
  ray.insert(ray.end(), extra.begin(), extra.end());
  std::sort(ray.begin(), ray.end(),
            [](const RaySample& x, const RaySample& y) { return std::abs(x.k) < std::abs(y.k); });
  return rings;
}

double symmetry_defect(const ScatteringData& sd) {
  const int m = sd.kgrid.m;
  const double tmax = sd.t.abs().maxCoeff();
  if (tmax == 0.0) return 0.0;
  double worst = 0.0;
  for (int a = 1; a < m; ++a)
    for (int b = 1; b < m; ++b) {
      if (sd.mask(a, b) != kData || sd.mask(m - a, m - b) != kData) continue;
      worst = std::max(worst, std::abs(sd.t(a, b) - std::conj(sd.t(m - a, m - b))));
    }
  return worst / tmax;
}

SmallKFit small_k_fit(const ScatteringData& sd, double c_inf, double gamma, std::optional<double> a_ref,
                      double k_lo, double k_hi) {
  SmallKFit fit;
  std::vector<std::pair<double, Complex>> pts;
  for (const auto& s : sd.ray) {
    const double r = std::abs(s.k);
    if (r < k_lo * (1 - 1e-12) || r > k_hi * (1 + 1e-12)) continue;
    if (s.exceptional) throw NumericalError("small-k fit", "exceptional sample on the small-k ray");
    pts.emplace_back(r, s.t);
    if (r <= 10.0 * k_lo * (1 + 1e-12)) fit.final_decade_max = std::max(fit.final_decade_max, std::abs(s.t));
    if (r >= k_hi / 10.0 * (1 - 1e-12)) fit.first_decade_max = std::max(fit.first_decade_max, std::abs(s.t));
  }
  fit.samples = static_cast<int>(pts.size());
  if (fit.samples < 2) throw NumericalError("small-k fit", "fewer than two ray samples in range");
  bool any_zero = false;
  for (const auto& p : pts) any_zero |= std::abs(p.second) == 0.0;
  fit.degenerate = any_zero || fit.final_decade_max < 0.1 * fit.first_decade_max;
  if (any_zero) return fit;

  Eigen::MatrixXd A(fit.samples, 2);
  Eigen::VectorXd re(fit.samples), im(fit.samples);
  for (int i = 0; i < fit.samples; ++i) {
    const Complex inv = 1.0 / pts[i].second;
    A(i, 0) = std::log(pts[i].first);
    A(i, 1) = 1.0;
    re(i) = inv.real();
    im(i) = inv.imag();
  }
  const auto qr = A.colPivHouseholderQr();
  const Eigen::Vector2d cre = qr.solve(re), cim = qr.solve(im);
  fit.slope = cre(0);
  fit.intercept = cre(1);
  fit.im_slope = cim(0);
  if (!fit.degenerate) {
    fit.a_est = c_inf / (M_PI * fit.intercept / 2.0 + gamma);
    if (a_ref) fit.gamma_abs = c_inf / *a_ref - M_PI * fit.intercept / 2.0;
  }
  return fit;
}

XNorm x_norm(const ScatteringData& sd, int n, double r, double eps) {
  if (!(r > 1.0 && r < 2.0)) throw ConfigError("x_norm exponent r must lie in (1, 2)");
  const KGrid& kg = sd.kgrid;
  const int m = kg.m;
  const double w = kg.hk() * kg.hk();
  const double rp = r / (r - 1.0) + eps;
  XNorm out;
  double s2 = 0.0, shigh = 0.0, sr = 0.0, ksmax = 0.0, sym = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const Complex k = kg.point(a, b);
      const double as = std::abs(sd.s(a, b));
      const double kn = std::pow(std::abs(k), n) * as;
      s2 += as * as;
      shigh += std::pow(kn, rp);
      sr += std::pow(kn, r);
      ksmax = std::max(ksmax, std::abs(k) * as);
      if (a >= 1 && b >= 1)
        sym = std::max(sym, std::abs(std::conj(k) * sd.s(a, b) + k * std::conj(sd.s(m - a, m - b))));
    }
  out.l2 = std::sqrt(w * s2);
  out.high = std::pow(w * shigh, 1.0 / rp);
  out.lr = std::pow(w * sr, 1.0 / r);
  out.value = out.l2 + out.high + out.lr;
  out.symmetry_defect = ksmax > 0.0 ? sym / ksmax : 0.0;
  return out;
}

}  // namespace nvist
