#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

namespace nvist {

struct KrylovOptions {
  double tol = 1e-8;      // relative to |b|
  int max_iter = 300;     // total inner iterations
  int restart = 50;
};

struct KrylovResult {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // |b - A x| / |b|
};

namespace detail {
template <typename S>
S givens_conj(S v) {
  if constexpr (std::is_same_v<S, double>) return v;
  else return std::conj(v);
}
}  // namespace detail

/// Restarted GMRES with modified Gram-Schmidt. `apply(v, out)` computes out = A v.
/// Vector is a dense Eigen column vector (real or complex); x holds the initial guess.
template <typename Vector, typename Op>
KrylovResult gmres(Op&& apply, const Vector& b, Vector& x, const KrylovOptions& opt) {
  using S = typename Vector::Scalar;
  using Real = typename Eigen::NumTraits<S>::Real;
  KrylovResult res;
  const Real bnorm = b.norm();
  if (bnorm == Real(0)) {
    x.setZero(b.size());
    return {true, 0, 0.0};
  }
  if (x.size() != b.size()) x.setZero(b.size());

  const int m = opt.restart;
  std::vector<Vector> V(m + 1);
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> H(m + 1, m);
  Eigen::Matrix<S, Eigen::Dynamic, 1> g(m + 1);
  std::vector<Real> cs(m);
  std::vector<S> sn(m);
  Vector w(b.size()), r(b.size());

  auto true_residual = [&]() {
    apply(x, w);
    r = b - w;
    return r.norm();
  };

  Real beta = true_residual();
  res.residual = beta / bnorm;
  while (res.iterations < opt.max_iter) {
    if (res.residual <= opt.tol) break;
    V[0] = r / beta;
    g.setZero();
    g(0) = beta;
    H.setZero();
    int j = 0;
    for (; j < m && res.iterations < opt.max_iter; ++j) {
      ++res.iterations;
      apply(V[j], w);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V[i].dot(w);
        w -= H(i, j) * V[i];
      }
      const Real hn = w.norm();
      H(j + 1, j) = hn;
      if (hn > Real(0)) V[j + 1] = w / hn;
      for (int i = 0; i < j; ++i) {
        const S t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -detail::givens_conj(sn[i]) * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const S a = H(j, j), c = H(j + 1, j);
      const Real den = std::sqrt(std::norm(a) + std::norm(c));
      if (den == Real(0)) {
        cs[j] = 1;
        sn[j] = 0;
      } else if (std::abs(a) == Real(0)) {
        cs[j] = 0;
        sn[j] = detail::givens_conj(c) / std::abs(c);
      } else {
        cs[j] = std::abs(a) / den;
        sn[j] = (a / std::abs(a)) * detail::givens_conj(c) / den;
      }
      H(j, j) = cs[j] * a + sn[j] * c;
      H(j + 1, j) = 0;
      g(j + 1) = -detail::givens_conj(sn[j]) * g(j);
      g(j) = cs[j] * g(j);
      if (std::abs(g(j + 1)) / bnorm <= opt.tol * 0.5 || hn == Real(0)) {
        ++j;
        break;
      }
    }
    // back substitution on the j x j triangle
    Eigen::Matrix<S, Eigen::Dynamic, 1> y =
        H.topLeftCorner(j, j).template triangularView<Eigen::Upper>().solve(g.head(j));
    for (int i = 0; i < j; ++i) x += y(i) * V[i];
    beta = true_residual();
    res.residual = beta / bnorm;
    if (!std::isfinite(res.residual)) break;
  }
  res.converged = res.residual <= opt.tol;
  return res;
}

/// Preconditioned conjugate gradients for a symmetric positive definite `apply`.
template <typename Vector, typename Op, typename Prec>
KrylovResult pcg(Op&& apply, Prec&& precondition, const Vector& b, Vector& x,
                 const KrylovOptions& opt) {
  using S = typename Vector::Scalar;
  KrylovResult res;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero(b.size());
    return {true, 0, 0.0};
  }
  if (x.size() != b.size()) x.setZero(b.size());
  Vector r(b.size()), z(b.size()), p(b.size()), q(b.size());
  apply(x, q);
  r = b - q;
  precondition(r, z);
  p = z;
  S rz = r.dot(z);
  res.residual = r.norm() / bnorm;
  while (res.residual > opt.tol && res.iterations < opt.max_iter) {
    ++res.iterations;
    apply(p, q);
    const S alpha = rz / p.dot(q);
    x += alpha * p;
    r -= alpha * q;
    res.residual = r.norm() / bnorm;
    if (res.residual <= opt.tol) break;
    precondition(r, z);
    const S rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  res.converged = res.residual <= opt.tol;
  return res;
}

}  // namespace nvist
