#include "kpz/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace kpz {

namespace {

constexpr double kAi0 = 0.355028053887817239;
constexpr double kAip0 = 0.258819403792806798;  // -Ai'(0)

double airy_maclaurin(double x) {
  const double x3 = x * x * x;
  double f = 1, g = x, tf = 1, tg = x;
  for (int k = 0; k < 200; ++k) {
    tf *= x3 / ((3 * k + 2.0) * (3 * k + 3.0));
    tg *= x3 / ((3 * k + 3.0) * (3 * k + 4.0));
    f += tf;
    g += tg;
    if (std::abs(tf) < 1e-18 * std::abs(f) && std::abs(tg) < 1e-18 * std::abs(g) + 1e-300) break;
  }
  return kAi0 * f - kAip0 * g;
}

// x > 0, returns Ai(x) e^{zeta}, zeta = 2/3 x^{3/2}
double airy_pos_scaled(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  if (x <= 2.5) return airy_maclaurin(x) * std::exp(zeta);
  if (x <= 8.0) return std::sqrt(x / 3.0) * std::cyl_bessel_k(1.0 / 3.0, zeta) * std::exp(zeta) / M_PI;
  double sum = 1, u = 1, zk = 1;
  for (int k = 1; k < 40; ++k) {
    u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
    zk *= -zeta;
    const double term = u / zk;
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return sum / (2.0 * std::sqrt(M_PI) * std::sqrt(std::sqrt(x)));
}

}  // namespace

double airy_ai(double x) {
  if (std::isnan(x)) return x;
  if (x >= -4.5 && x <= 2.5) return airy_maclaurin(x);
  if (x > 2.5) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    if (zeta > 740) return 0.0;
    if (x <= 8.0) return std::sqrt(x / 3.0) * std::cyl_bessel_k(1.0 / 3.0, zeta) / M_PI;
    return airy_pos_scaled(x) * std::exp(-zeta);
  }
  const double y = -x, zeta = 2.0 / 3.0 * y * std::sqrt(y);
  return std::sqrt(y) / 2.0 * (std::cyl_bessel_j(1.0 / 3.0, zeta) - std::cyl_neumann(1.0 / 3.0, zeta) / std::sqrt(3.0));
}

double airy_ai_scaled(double x) { return x > 0 ? airy_pos_scaled(x) : airy_ai(x); }

double exp_ai(double a, double x) {
  if (x <= 0) return std::exp(a) * airy_ai(x);
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  return std::exp(a - zeta) * airy_pos_scaled(x);
}

std::complex<double> lambert_w0(std::complex<double> z) {
  using C = std::complex<double>;
  const double em1 = std::exp(-1.0);
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::domain_error("lambert_w0: non-finite argument");
  if (z.imag() == 0.0 && z.real() < -em1) throw std::domain_error("lambert_w0: argument on the branch cut (-inf, -1/e)");
  if (z == C(0)) return 0;
  if (std::abs(z + em1) < 1e-300) return -1;
  const C ez1 = std::exp(1.0) * z + 1.0;
  C w;
  if (std::abs(ez1) < 1.0) {
    C p = std::sqrt(2.0 * ez1);
    if (p.real() < 0) p = -p;
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (std::abs(z) < 3.0) {
    w = std::log(1.0 + z);
  } else {
    const C l1 = std::log(z);
    w = l1 - std::log(l1);
  }
  for (int it = 0; it < 20; ++it) {
    const C ew = std::exp(w);
    const C f = w * ew - z;
    const C wp1 = w + 1.0;
    if (std::abs(wp1) < 1e-15) break;
    const C dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= dw;
    if (std::abs(dw) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double heat_kernel(double r1, double r2, double s1, double s2) {
  if (!(r2 > r1)) throw std::domain_error("heat_kernel: requires r2 > r1");
  const double d = r2 - r1;
  return std::exp(-(s2 - s1) * (s2 - s1) / (4 * d)) / std::sqrt(4 * M_PI * d);
}

}  // namespace kpz
