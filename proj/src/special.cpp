#include "nvist/special.hpp"

#include <cmath>
#include <limits>

namespace nvist {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kEps2 = kEps * kEps;

Complex e1_series(Complex w) {
  // E1 = -gamma - log w - sum_{n>=1} (-w)^n / (n n!)
  Complex term = 1.0, sum = 0.0;
  for (int n = 1; n < 500; ++n) {
    term *= -w * (1.0 / n);
    const Complex add = term * (1.0 / n);
    sum += add;
    if (std::norm(add) <= kEps2 * std::norm(sum)) break;
  }
  return -kEulerGamma - std::log(w) - sum;
}

Complex exp_e1_continued_fraction(Complex w) {
  // e^w E1(w) = 1/(w+1- 1/(w+3- 4/(w+5- ...))), modified Lentz.
  const double tiny = 1e-300;
  Complex b = w + 1.0;
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 1; i < 20000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const Complex del = c * d;
    h *= del;
    if (std::norm(del - 1.0) < 4.0 * kEps2) break;
  }
  return h;
}

Complex exp_e1_asymptotic(Complex w) {
  // sum_n (-1)^n n! / w^{n+1}, truncated at the smallest term.
  const Complex inv = 1.0 / w;
  Complex term = inv, sum = term;
  double last = std::norm(term);
  for (int n = 1; n < 200; ++n) {
    const Complex next = -static_cast<double>(n) * term * inv;
    const double mag = std::norm(next);
    if (mag > last) break;
    sum += next;
    term = next;
    last = mag;
    if (mag <= kEps2 * std::norm(sum)) break;
  }
  return sum;
}

bool use_series(Complex w, double r) {
  // Power-series cancellation costs about e^{|w| + Re w}.
  return r <= 2.5 || (r < 30.0 && r + w.real() <= 8.0);
}

}  // namespace

Complex exp_e1(Complex w) {
  const double r = std::abs(w);
  if (use_series(w, r)) return std::exp(w) * e1_series(w);
  if (r >= 30.0) return exp_e1_asymptotic(w);
  return exp_e1_continued_fraction(w);
}

Complex expint_e1(Complex w) {
  if (use_series(w, std::abs(w))) return e1_series(w);
  return std::exp(-w) * exp_e1(w);
}

Complex exp_re_e1(Complex w) {
  // e^w Re E1(w) = e^{i Im w} Re(e^{-i Im w} e^w E1(w)); the real factor keeps
  // conj(H(w)) = e^{-2i Im w} H(w) exact whatever the rounding in e^w E1(w).
  const Complex rot = std::polar(1.0, w.imag());
  const double a = (std::conj(rot) * exp_e1(w)).real();
  return rot * a;
}

Complex faddeev_green(Complex k, Complex x) {
  return -(2.0 / M_PI) * exp_re_e1(Complex(0.0, -1.0) * k * x);
}

Complex faddeev_kernel_sample(Complex k, Complex x, double h) {
  if (x == Complex{})
    return (2.0 / M_PI) * (kEulerGamma + std::log(std::abs(k)) + std::log(h) + kLogCellConstant);
  return faddeev_green(k, x);
}

double log_kernel_sample(Complex x, double h) {
  if (x == Complex{}) return -(2.0 / M_PI) * (std::log(h) + kLogCellConstant);
  return -(2.0 / M_PI) * std::log(std::abs(x));
}

}  // namespace nvist
