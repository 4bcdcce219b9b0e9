#include "nvist/potentials.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "nvist/convolution.hpp"
#include "nvist/errors.hpp"
#include "nvist/field.hpp"
#include "nvist/krylov.hpp"
#include "nvist/special.hpp"

namespace nvist {

std::string to_string(PotentialFamily f) {
  return f == PotentialFamily::conductivity ? "conductivity" : "perturbed";
}

PotentialFamily potential_family_from_string(const std::string& s) {
  if (s == "conductivity") return PotentialFamily::conductivity;
  if (s == "perturbed") return PotentialFamily::perturbed;
  throw ConfigError("unknown potential family '" + s + "'");
}

std::string to_string(PotentialClass c) {
  switch (c) {
    case PotentialClass::critical: return "critical";
    case PotentialClass::subcritical: return "subcritical";
    case PotentialClass::supercritical: return "supercritical";
    case PotentialClass::critical_or_subcritical: return "critical_or_subcritical";
    default: return "indeterminate";
  }
}

namespace {

constexpr double kCapInner = 2.6;
constexpr double kCapOuter = 3.4;

}  // namespace

Field bump(const Grid2D& g, Complex center, double radius) {
  if (!(radius > 0.0)) throw ConfigError("bump radius must be positive");
  return Field::sample(g, [&](Complex x) -> Complex {
    const double r = std::abs(x - center) / radius;
    if (r >= kCapOuter) return 0.0;
    const double cap = 1.0 - smooth_step((r - kCapInner) / (kCapOuter - kCapInner));
    return std::exp(-4.0 * r * r) * cap;
  });
}

Field conductivity_root(const Grid2D& g, const PotentialSpec& spec) {
  if (spec.beta <= -1.0) throw ConfigError("conductivity amplitude beta must exceed -1");
  Field sigma = bump(g, spec.center, spec.radius);
  sigma.values = 1.0 + spec.beta * sigma.values;
  if (sigma.values.real().minCoeff() <= 0.0) throw ConfigError("conductivity is not positive");
  sigma.values = sigma.values.sqrt();
  return sigma;
}

Field conductivity_potential(const Grid2D& g, const PotentialSpec& spec) {
  const Field psi = conductivity_root(g, spec);
  if (spec.beta == 0.0) return Field(g);
  Field q = spectral_derivative(psi, Derivative::dbar_d);
  q.values = (q.values / psi.values).real().cast<Complex>();
  return q;
}

Field perturb(const Field& q, const Field& b, double epsilon) {
  return {q.grid, q.values + epsilon * b.values};
}

Field make_potential(const Grid2D& g, const PotentialSpec& spec) {
  Field q = conductivity_potential(g, spec);
  if (spec.family == PotentialFamily::perturbed && spec.epsilon != 0.0)
    q = perturb(q, bump(g, spec.center, spec.radius), spec.epsilon);
  return q;
}

// ---- quadratic form -------------------------------------------------------

ClassificationReport classify_by_form(const Field& q, const FormOptions& opt) {
  const Grid2D& g = q.grid;
  const int n = g.n, N = n * n;
  const Eigen::ArrayXd qv = Eigen::Map<const Eigen::ArrayXcd>(q.values.data(), N).real();
  const double qmax = qv.abs().maxCoeff();
  ClassificationReport rep;
  rep.tol_eig = qmax > 0.0 ? opt.tol_eig_rel * qmax : opt.tol_eig_abs;

  const double scale = std::max(1.0, qmax);
  const double shift = qv.minCoeff() - opt.shift_margin * scale;
  const double precond_c = std::max(qv.mean() - shift, 1e-3);

  RealArray lap(n, n);  // symbol of -dbar d
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lap(i, j) = std::norm(g.zeta(i, j)) / 4.0;

  auto fourier = [&](const Eigen::VectorXd& v, auto&& symbol_op, Eigen::VectorXd& out) {
    ComplexArray a(n, n);
    Eigen::Map<Eigen::ArrayXcd>(a.data(), N) = v.array().cast<Complex>();
    fft2(a);
    symbol_op(a);
    ifft2(a);
    out = Eigen::Map<const Eigen::ArrayXcd>(a.data(), N).real().matrix();
  };
  auto shifted = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    fourier(v, [&](ComplexArray& a) { a *= lap.cast<Complex>(); }, out);
    out.array() += (qv - shift) * v.array();
  };
  auto precondition = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    fourier(v, [&](ComplexArray& a) { a /= (lap + precond_c).cast<Complex>(); }, out);
  };

  Eigen::VectorXd x = Eigen::VectorXd::Ones(N) / std::sqrt(double(N));
  Eigen::VectorXd y(N), hx(N);
  const KrylovOptions inner{1e-11, 2000, 0};
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < opt.max_outer; ++it) {
    rep.iterations = it + 1;
    y = x;  // warm start
    const auto cg = pcg(shifted, precondition, x, y, inner);
    if (!cg.converged) {
      rep.diagnostic = "inner solve stalled at residual " + std::to_string(cg.residual);
      break;
    }
    x = y / y.norm();
    shifted(x, hx);
    const double rq = x.dot(hx);
    lambda = rq + shift;
    const double r = (hx - rq * x).norm();
    if (r <= 1e-7 * scale) {
      converged = true;
      break;
    }
  }
  rep.lambda_min = lambda;
  if (!converged) {
    rep.class_guess = PotentialClass::indeterminate;
    if (rep.diagnostic.empty()) rep.diagnostic = "inverse iteration did not converge";
    return rep;
  }
  rep.class_guess = lambda < -rep.tol_eig ? PotentialClass::supercritical
                                          : PotentialClass::critical_or_subcritical;
  return rep;
}

// ---- positive solution -----------------------------------------------------

PositiveSolution positive_solution(const Field& q, const PositiveSolutionOptions& opt) {
  const Grid2D& g = q.grid;
  const int n = g.n;
  const double h = g.h();
  PositiveSolution out;
  out.psi = Field::constant(g, 1.0);

  const IndexBox box = support_box(q, 1e-13);
  if (box.size() > 0) {
    auto kernel = [&](int di, int dj) -> Complex {
      return g.cell_area() * log_kernel_sample(Complex(di * h, dj * h), h);
    };
    const LatticeConvolution local(box, box, kernel);
    const ComplexArray qw = q.values.block(box.row0, box.col0, box.rows, box.cols);
    const int W = box.size();
    auto apply = [&](const Eigen::VectorXd& v, Eigen::VectorXd& r) {
      ComplexArray s(box.rows, box.cols), conv;
      Eigen::Map<Eigen::ArrayXcd>(s.data(), W) = v.array().cast<Complex>();
      s *= qw;
      local.apply(s, conv);
      r = v + Eigen::Map<const Eigen::ArrayXcd>(conv.data(), W).real().matrix();
    };
    const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(W);
    Eigen::VectorXd psi = rhs;
    const auto kr = gmres(apply, rhs, psi, KrylovOptions{opt.tol, opt.max_iter, 60});
    out.iterations = kr.iterations;
    if (!kr.converged)
      throw NumericalError("classify", "positive-solution solve did not converge (residual " +
                                           std::to_string(kr.residual) + ")");
    ComplexArray s(box.rows, box.cols), conv;
    Eigen::Map<Eigen::ArrayXcd>(s.data(), W) = psi.array().cast<Complex>();
    s *= qw;
    const LatticeConvolution full(box, IndexBox{0, 0, n, n}, kernel);
    full.apply(s, conv);
    out.psi.values = 1.0 - conv.real().cast<Complex>();
  }

  // log-growth fit on the annulus and c_inf average over the disk
  const double r_in = g.L / 2.0, r_out = 3.0 * g.L / 4.0;
  Eigen::Matrix2d AtA = Eigen::Matrix2d::Zero();
  Eigen::Vector2d Atb = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = std::abs(g.point(i, j));
      if (r < r_in || r > r_out) continue;
      const double p = out.psi.values(i, j).real();
      if (p <= 0.0) throw ClassificationConflict("positive solution is not positive on the fit annulus");
      const Eigen::Vector2d row(std::log(r), 1.0);
      AtA += row * row.transpose();
      Atb += row * p;
    }
  const Eigen::Vector2d ac = AtA.ldlt().solve(Atb);
  out.a_est = ac(0);
  double sum = 0.0, area = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = std::abs(g.point(i, j));
      if (r >= r_out) continue;
      const double logr = r > 0.0 ? std::log(r) : std::log(h) + kLogCellConstant;
      sum += out.psi.values(i, j).real() - out.a_est * logr;
      area += 1.0;
    }
  out.c_inf_est = sum / area;
  return out;
}

ClassificationReport classify(const Field& q, const ClassifyOptions& opt) {
  ClassificationReport rep = classify_by_form(q, opt.form);
  if (rep.class_guess != PotentialClass::critical_or_subcritical) return rep;
  const PositiveSolution ps = positive_solution(q, opt.positive);
  rep.a_est = ps.a_est;
  rep.c_inf_est = ps.c_inf_est;
  rep.class_guess = std::abs(ps.a_est) <= opt.a_critical ? PotentialClass::critical
                                                         : PotentialClass::subcritical;
  return rep;
}

}  // namespace nvist
