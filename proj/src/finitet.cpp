#include "kpz/finitet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpz/fredholm.hpp"
#include "kpz/specfun.hpp"

namespace kpz {

namespace {

const cplx I(0, 1);

bool is_integer(double n) { return std::floor(n) == n && std::abs(n) < 1e15; }

// natural width of the integrands in the contour variable, and of the kernels in xi
double w_scale(double t) { return std::max(std::cbrt(1 / t), std::sqrt(1 / t)); }
double xi_scale(double t) { return std::min(std::cbrt(t), std::sqrt(t)); }

cplx log_a(double t, double n, double xi, cplx w) {
  cplx v = t * (w * w - 1.0) / 2.0 + xi * (w + 1.0);
  if (n != 0) v += n * std::log(-w);
  return v;
}

cplx log_b(double t, double n, double xi, cplx z) {
  cplx v = -t * (z * z - 1.0) / 2.0 - xi * (z + 1.0);
  if (n != 0) v -= n * std::log(-z);
  return v;
}

double circle_b(double t, double n, double xi, double* imag) {
  const double D = xi * xi - 4 * t * n;
  const double R = (D > 0 && xi > 0) ? (xi - std::sqrt(D)) / (2 * t) : std::sqrt(n / t);
  if (!(R >= 1e-3)) throw std::runtime_error("contour_b: loop radius below the pole margin");
  auto eval = [&](int M, int k) {
    const cplx z = std::polar(R, 2 * M_PI * k / M);
    return log_b(t, n, xi, z) + std::log(z);
  };
  // peak on the circle sits on the negative axis or near the complex saddles; take it from a coarse pass
  int M = 64;
  std::vector<cplx> lv(static_cast<size_t>(M));
  double peak = -INFINITY;
  for (int k = 0; k < M; ++k) {
    lv[size_t(k)] = eval(M, k);
    peak = std::max(peak, lv[size_t(k)].real());
  }
  auto sum = [&](const std::vector<cplx>& v, double& mass) {
    cplx s = 0;
    mass = 0;
    for (auto& x : v) {
      const cplx e = std::exp(x - peak);
      s += e;
      mass += std::abs(e);
    }
    return s;
  };
  double mass;
  cplx prev = sum(lv, mass) / double(M);
  for (;;) {
    std::vector<cplx> nv(static_cast<size_t>(2 * M));
    for (int k = 0; k < M; ++k) {
      nv[size_t(2 * k)] = lv[size_t(k)];
      nv[size_t(2 * k + 1)] = eval(2 * M, 2 * k + 1);
    }
    M *= 2;
    lv.swap(nv);
    const cplx cur = sum(lv, mass) / double(M);
    const bool done = std::abs(cur - prev) <= 1e-15 * mass / M + 1e-300;
    prev = cur;
    if (done || M >= (1 << 17)) break;
  }
  if (imag) *imag = prev.imag() * std::exp(peak);
  return prev.real() * std::exp(peak);
}

// first y beyond which g(y) stays below peak - drop, probing with the given step
double decay_length(const std::function<double(double)>& logmag, double step, double drop, double y_max) {
  double peak = -INFINITY, y = 0;
  int below = 0;
  while (y < y_max) {
    const double v = logmag(y);
    if (std::isfinite(v)) peak = std::max(peak, v);
    if (v < peak - drop || v == -INFINITY) {
      if (++below >= 4) return y;
    } else {
      below = 0;
    }
    y += step;
  }
  return y_max;
}

double safe_log_abs(double v) { return v == 0 ? -INFINITY : std::log(std::abs(v)); }

}  // namespace

double scaled_index(double t, double r) { return t + 2 * r * std::pow(t, 2.0 / 3); }
double scaled_position(double t, double r, double s) {
  return 2 * t + 2 * r * std::pow(t, 2.0 / 3) + s * std::cbrt(t);
}
double unscale_r(double t, double n) { return (n - t) / (2 * std::pow(t, 2.0 / 3)); }
double unscale_s(double t, double r, double xi) {
  return (xi - 2 * t - 2 * r * std::pow(t, 2.0 / 3)) / std::cbrt(t);
}

double contour_a(double t, double n, double xi, double* imag) {
  if (!(t > 0)) throw std::invalid_argument("contour_a: t must be positive");
  double v;
  if (n == 0) {
    v = -xi / t;
  } else {
    const double D = xi * xi - 4 * t * n;
    v = D > 0 ? (-xi - std::sqrt(D)) / (2 * t) : -xi / (2 * t);
    if (!is_integer(n)) v = std::min(v, -1e-3);
  }
  auto lf = [&](cplx w) { return log_a(t, n, xi, w); };
  return wedge_integral(lf, v, 2 * M_PI / 3, w_scale(t), true, imag, is_integer(n) ? INFINITY : -v);
}

double contour_b(double t, double n, double xi, double* imag, bool force_wedge) {
  if (!(t > 0)) throw std::invalid_argument("contour_b: t must be positive");
  const bool integer = is_integer(n);
  if (integer && n <= 0) {
    if (imag) *imag = 0;
    return 0;
  }
  const double D = xi * xi - 4 * t * n;
  const double v = D > 0 ? (-xi + std::sqrt(D)) / (2 * t) : -xi / (2 * t);
  // the wedge is cheaper; the circle handles saddles near or right of the pole
  if (integer && !force_wedge && !(v < -0.05)) return circle_b(t, n, xi, imag);
  if (!(v < -1e-3)) throw std::runtime_error("contour_b: wedge vertex too close to the pole at 0");
  auto lf = [&](cplx z) { return log_b(t, n, xi, z); };
  return wedge_integral(lf, v, 0.23 * M_PI, w_scale(t), false, imag, -v);
}

AlphaBeta alpha_beta(double t, double r, double s) {
  const double n = scaled_index(t, r), xi = scaled_position(t, r, s), c = std::cbrt(t);
  AlphaBeta out;
  out.alpha = c * contour_a(t, n, xi, &out.alpha_imag);
  out.beta = c * contour_b(t, n, xi, &out.beta_imag, true);
  out.alpha_imag *= c;
  out.beta_imag *= c;
  return out;
}

double alpha_limit(double r, double s) { return exp_ai(-2.0 / 3 * r * r * r - r * s, r * r + s); }
double beta_limit(double r, double s) { return -exp_ai(2.0 / 3 * r * r * r + r * s, r * r + s); }

FiniteKernel::FiniteKernel(const FiniteTimeSpec& spec, double xi_lo, double xi_hi) : spec_(spec), lo_(xi_lo), hi_(xi_hi) {
  if (!(spec.t > 0)) throw std::invalid_argument("FiniteKernel: t must be positive");
  if (!(xi_hi > xi_lo)) throw std::invalid_argument("FiniteKernel: empty range");
  if (spec.flavor == Flavor::stat && !(spec.lambda > spec.rho && spec.rho > 0))
    throw std::invalid_argument("stat kernel needs lambda > rho > 0");
  if (spec.flavor == Flavor::stat_flat && !(spec.rho > 0)) throw std::invalid_argument("stat-flat kernel needs rho > 0");
}

const FiniteKernel::Tables& FiniteKernel::tables(int64_t n) const {
  auto it = cache_.find(n);
  if (it != cache_.end()) return *it->second;
  const double t = spec_.t, sc = xi_scale(t), nn = double(n);
  auto fa = [t, nn](double x) { return contour_a(t, nn, x); };
  auto fb = [t, nn](double x) { return contour_b(t, nn, x); };
  // x-integrals run from the lowest node until a has died out
  const double ya = decay_length([&](double y) { return safe_log_abs(fa(lo_ + y)); }, 0.5 * sc, 40, 400 * sc);
  double yg = 0;
  if (spec_.flavor == Flavor::stat) {
    const double d = 1 - spec_.rho;
    yg = decay_length([&](double y) { return d * y + safe_log_abs(fb(lo_ + y)); }, std::max(0.5, 0.5 * sc), 40,
                      1e4);
  }
  auto tb = std::make_unique<Tables>();
  const double top = hi_ + 1.5 * std::max(ya, yg) + 1;
  tb->a = ChebTable(fa, lo_, top, 0.5 * sc);
  tb->b = ChebTable(fb, lo_, top, 0.5 * sc);
  const double pw = 0.5 * std::min(1.0, sc);
  tb->ya = composite_gl(0, ya, std::max(1, int(std::ceil(ya / pw))), 8);
  if (yg > 0) tb->yg = composite_gl(0, yg, std::max(1, int(std::ceil(yg / pw))), 8);
  auto& ref = *tb;
  cache_[n] = std::move(tb);
  return ref;
}

double FiniteKernel::a(int64_t n, double xi) const { return tables(n).a(xi); }
double FiniteKernel::b(int64_t n, double xi) const { return tables(n).b(xi); }

double FiniteKernel::f(int64_t n, double xi) const {
  const auto& tb = tables(n);
  double s = 0;
  for (size_t q = 0; q < tb.ya.size(); ++q) s += tb.ya.weights[q] * tb.a(xi + tb.ya.nodes[q]);
  return 1 - s;
}

double FiniteKernel::g(int64_t n, double xi) const {
  const double t = spec_.t, rho = spec_.rho;
  if (spec_.flavor == Flavor::half_stat) return -b(n + 1, xi);
  if (spec_.flavor != Flavor::stat) throw std::logic_error("g is defined for stat and half-stat only");
  const auto& tb = tables(n);
  const double d = 1 - rho;
  double s = std::exp(t * (1 - rho * rho) / 2 - d * xi - double(n) * std::log(rho));
  for (size_t q = 0; q < tb.yg.size(); ++q) {
    const double y = tb.yg.nodes[q];
    s += tb.yg.weights[q] * std::exp(d * y) * tb.b(xi + y);
  }
  return s;
}

Eigen::MatrixXd FiniteKernel::k0(int64_t n1, const std::vector<double>& x1, int64_t n2,
                                 const std::vector<double>& x2) const {
  const auto& t1 = tables(n1);
  const auto& t2 = tables(n2);
  const auto& y = t1.ya;
  Eigen::MatrixXd A(x1.size(), y.size()), B(y.size(), x2.size());
  for (size_t i = 0; i < x1.size(); ++i)
    for (size_t q = 0; q < y.size(); ++q) A(Eigen::Index(i), Eigen::Index(q)) = y.weights[q] * t1.a(x1[i] + y.nodes[q]);
  for (size_t q = 0; q < y.size(); ++q)
    for (size_t j = 0; j < x2.size(); ++j) B(Eigen::Index(q), Eigen::Index(j)) = t2.b(x2[j] + y.nodes[q]);
  return -A * B;
}

Eigen::MatrixXd FiniteKernel::phi_part(int64_t n1, const std::vector<double>& x1, int64_t n2,
                                       const std::vector<double>& x2) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(Eigen::Index(x1.size()), Eigen::Index(x2.size()));
  if (n2 <= n1) return M;
  const int64_t k = n2 - n1;
  const double lg = std::lgamma(double(k));
  for (size_t i = 0; i < x1.size(); ++i)
    for (size_t j = 0; j < x2.size(); ++j) {
      const double d = x2[j] - x1[i];
      if (d < 0) continue;
      if (k == 1)
        M(Eigen::Index(i), Eigen::Index(j)) = std::exp(-d);
      else if (d > 0)
        M(Eigen::Index(i), Eigen::Index(j)) = std::exp(-d + double(k - 1) * std::log(d) - lg);
    }
  return M;
}

Eigen::MatrixXd FiniteKernel::half_flat_part(int64_t n1, const std::vector<double>& x1, int64_t n2,
                                             const std::vector<double>& x2, double loop_radius) const {
  const double t = spec_.t;
  const double m1 = double(n1), m2 = double(n2);
  const double Y = decay_length([&](double y) { return -t * y * y / 2 + m1 / 2 * std::log1p(y * y); },
                                0.05 * w_scale(t), 40, 1e3);
  double slope = 0, xmax = 0;
  for (double x : x1) slope = std::max(slope, std::abs(x - t));
  for (double x : x2) xmax = std::max(xmax, std::abs(x));
  slope += std::abs(m1) + 1;
  const int panels = std::max(8, int(std::ceil(2 * Y * slope / (2 * M_PI))));
  const auto wl = vertical_line(-1, Y, panels, 12);
  const int Q = std::max(spec_.loop_points, 4 * int(std::ceil(xmax)));
  const auto zl = lambert_loop(loop_radius, Q);

  double wmin = INFINITY, zmax = 0;
  for (auto& w : wl) wmin = std::min(wmin, std::abs(w.z * std::exp(w.z)));
  for (auto& z : zl) zmax = std::max(zmax, std::abs(z.z * std::exp(z.z)));
  if (!(zmax < 0.95 * wmin)) throw std::runtime_error("half-flat contours violate |z e^z| < |w e^w|");

  const Eigen::Index P = Eigen::Index(wl.size()), Qn = Eigen::Index(zl.size());
  Eigen::MatrixXcd A(Eigen::Index(x1.size()), P), M(P, Qn), B(Qn, Eigen::Index(x2.size()));
  for (size_t i = 0; i < x1.size(); ++i)
    for (Eigen::Index p = 0; p < P; ++p) {
      const auto& w = wl[size_t(p)];
      A(Eigen::Index(i), p) = std::exp(log_a(t, m1, x1[i], w.z)) * w.dz / (2 * M_PI * I);
    }
  for (Eigen::Index p = 0; p < P; ++p) {
    const cplx we = wl[size_t(p)].z * std::exp(wl[size_t(p)].z);
    for (Eigen::Index q = 0; q < Qn; ++q) {
      const cplx z = zl[size_t(q)].z, ez = std::exp(z);
      M(p, q) = (1.0 + z) * ez / (we - z * ez);
    }
  }
  for (Eigen::Index q = 0; q < Qn; ++q) {
    const auto& z = zl[size_t(q)];
    for (size_t j = 0; j < x2.size(); ++j)
      B(q, Eigen::Index(j)) = std::exp(log_b(t, m2, x2[j], z.z)) * z.dz / (2 * M_PI * I);
  }
  const Eigen::MatrixXcd K = A * (M * B);
  return K.real();
}

Eigen::MatrixXd FiniteKernel::stat_flat_extra(int64_t n1, const std::vector<double>& x1, int64_t n2,
                                              const std::vector<double>& x2) const {
  const double t = spec_.t, rho = spec_.rho, m2 = double(n2);
  double xmax = 0;
  for (double x : x2) xmax = std::max(xmax, std::abs(x));
  const double c = 0.9 * std::min(rho * std::exp(-rho), std::exp(-1.0));
  const auto zl = lambert_loop(c, std::max(spec_.loop_points, 4 * int(std::ceil(xmax))));
  Eigen::VectorXd left(Eigen::Index(x1.size())), right(Eigen::Index(x2.size()));
  for (size_t i = 0; i < x1.size(); ++i) left(Eigen::Index(i)) = contour_a(t, double(n1 - 1), x1[i] - 1);
  for (size_t j = 0; j < x2.size(); ++j) {
    cplx s = 0;
    for (auto& z : zl) {
      const cplx den = rho + z.z * std::exp(rho + z.z);
      if (std::abs(den) < 1e-3) throw std::runtime_error("stat-flat loop passes too close to a pole");
      s += std::exp(log_b(t, m2, x2[j] - 1, z.z)) * rho * (1.0 + z.z) / den * z.dz;
    }
    const double res = std::exp((1 - m2) * std::log(rho) + t * (1 - rho * rho) / 2 - (1 - rho) * (x2[j] - 1));
    right(Eigen::Index(j)) = (s / (2 * M_PI * I)).real() + res;
  }
  return left * right.transpose();
}

Eigen::MatrixXd FiniteKernel::flat_part(int64_t n1, const std::vector<double>& x1, int64_t n2,
                                        const std::vector<double>& x2) const {
  const double t = spec_.t, m1 = double(n1), m2 = double(n2);
  const double v = -1.2, th = 3 * M_PI / 5, step = 0.25 * w_scale(t);
  auto phi = [](cplx z) { return lambert_w0(z * std::exp(z)); };
  const double xa = x1.front(), xb = x2.front();
  auto lf = [&](cplx z) { return log_a(t, m1, xa, z) + log_b(t, m2, xb, phi(z)); };
  const double U = arm_extent(lf, v, th, step);
  double xm = 0;
  for (double x : x1) xm = std::max(xm, std::abs(x));
  for (double x : x2) xm = std::max(xm, std::abs(x));
  const int panels = std::max({4, int(std::ceil(U / (2 * step))), int(std::ceil(U * (xm + std::abs(m1) + std::abs(m2) + t * U) / M_PI))});
  const auto arm = wedge_arm(v, th, U, panels, 12);
  // both arms, the lower one traversed inward
  std::vector<ContourNode> nodes;
  nodes.reserve(2 * arm.size());
  for (auto it = arm.rbegin(); it != arm.rend(); ++it) nodes.push_back({std::conj(it->z), -std::conj(it->dz)});
  for (auto& a : arm) nodes.push_back(a);
  std::vector<cplx> ph(nodes.size());
  for (size_t p = 0; p < nodes.size(); ++p) ph[p] = phi(nodes[p].z);
  for (size_t p = 1; p < nodes.size(); ++p)
    if (std::abs(ph[p] - ph[p - 1]) > 0.5 + 10 * std::abs(nodes[p].z - nodes[p - 1].z))
      throw std::runtime_error("flat contour: L0(z e^z) is discontinuous along the contour");
  const Eigen::Index P = Eigen::Index(nodes.size());
  Eigen::MatrixXcd A(Eigen::Index(x1.size()), P), B(P, Eigen::Index(x2.size()));
  for (size_t i = 0; i < x1.size(); ++i)
    for (Eigen::Index p = 0; p < P; ++p)
      A(Eigen::Index(i), p) = std::exp(log_a(t, m1, x1[i], nodes[size_t(p)].z)) * nodes[size_t(p)].dz / (2 * M_PI * I);
  for (Eigen::Index p = 0; p < P; ++p)
    for (size_t j = 0; j < x2.size(); ++j) B(p, Eigen::Index(j)) = std::exp(log_b(t, m2, x2[j], ph[size_t(p)]));
  return (A * B).real();
}

Eigen::MatrixXd FiniteKernel::block(int64_t n1, const std::vector<double>& x1, int64_t n2,
                                    const std::vector<double>& x2) const {
  Eigen::MatrixXd K = -phi_part(n1, x1, n2, x2);
  switch (spec_.flavor) {
    case Flavor::packed:
      K += k0(n1, x1, n2, x2);
      break;
    case Flavor::stat:
    case Flavor::half_stat: {
      K += k0(n1, x1, n2, x2);
      const double c = spec_.flavor == Flavor::stat ? spec_.lambda - spec_.rho : spec_.lambda;
      Eigen::VectorXd F(Eigen::Index(x1.size())), G(Eigen::Index(x2.size()));
      for (size_t i = 0; i < x1.size(); ++i) F(Eigen::Index(i)) = f(n1, x1[i]);
      for (size_t j = 0; j < x2.size(); ++j) G(Eigen::Index(j)) = g(n2, x2[j]);
      K += c * F * G.transpose();
      break;
    }
    case Flavor::half_flat:
      K += half_flat_part(n1, x1, n2, x2, 0.9 * std::exp(-1.0));
      break;
    case Flavor::stat_flat:
      K += half_flat_part(n1, x1, n2, x2, 0.9 * std::min(spec_.rho * std::exp(-spec_.rho), std::exp(-1.0)));
      K += stat_flat_extra(n1, x1, n2, x2);
      break;
    case Flavor::flat:
      K += flat_part(n1, x1, n2, x2);
      break;
  }
  return K;
}

double FiniteKernel::operator()(int64_t n1, double xi1, int64_t n2, double xi2) const {
  return block(n1, {xi1}, n2, {xi2})(0, 0);
}

namespace {

void check_indices(Flavor f, const std::vector<int64_t>& n) {
  for (size_t k = 0; k < n.size(); ++k) {
    if (k > 0 && n[k] <= n[k - 1]) throw std::invalid_argument("indices must be strictly increasing");
    const int64_t lo = (f == Flavor::stat || f == Flavor::half_stat) ? 0 : f == Flavor::flat ? INT64_MIN : 1;
    if (n[k] < lo) throw std::invalid_argument("index below the first particle of the " + to_string(f) + " system");
  }
}

// stat and half-stat with lambda != 1 are mapped to lambda = 1 by Brownian scaling
FiniteTimeSpec normalized(const FiniteTimeSpec& s, double& space) {
  FiniteTimeSpec o = s;
  space = 1;
  if ((s.flavor == Flavor::stat || s.flavor == Flavor::half_stat) && s.lambda != 1) {
    if (!(s.lambda > 0)) throw std::invalid_argument("lambda must be positive");
    space = s.lambda;
    o.t = s.lambda * s.lambda * s.t;
    o.rho = s.rho / s.lambda;
    o.lambda = 1;
  }
  return o;
}

}  // namespace

double kernel_finite(const FiniteTimeSpec& spec, int64_t n1, double xi1, int64_t n2, double xi2) {
  double space;
  const auto s = normalized(spec, space);
  const double c = std::cbrt(spec.t);
  FiniteKernel K(s, std::min(xi1, xi2) * space - 1, std::max(xi1, xi2) * space + 1);
  return c * space * K(n1, space * xi1, n2, space * xi2);
}

double finite_t_det(const FiniteKernel& kernel, const std::vector<int64_t>& n, const std::vector<double>& a) {
  const auto& sp = kernel.spec();
  check_indices(sp.flavor, n);
  if (n.size() != a.size() || n.empty()) throw std::invalid_argument("need one threshold per index");
  const double c = std::cbrt(sp.t);
  std::vector<double> r(n.begin(), n.end());
  MultiPointDomain dom(r, a, sp.order, sp.L * c, sp.x_cut * c);
  const NodeSet nodes = discretize(dom);
  const size_t m = n.size();
  std::vector<std::vector<double>> xs(m);
  for (size_t k = 0; k < m; ++k) xs[k].assign(nodes.x.begin() + long(nodes.offset[k]), nodes.x.begin() + long(nodes.offset[k + 1]));
  Eigen::MatrixXd K(Eigen::Index(nodes.size()), Eigen::Index(nodes.size()));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      K.block(Eigen::Index(nodes.offset[i]), Eigen::Index(nodes.offset[j]), Eigen::Index(xs[i].size()),
              Eigen::Index(xs[j].size())) = kernel.block(n[i], xs[i], n[j], xs[j]);
  return det_from_matrix(K, nodes);
}

double finite_t_det(const FiniteTimeSpec& spec, const std::vector<int64_t>& n, const std::vector<double>& a) {
  double space;
  const auto s = normalized(spec, space);
  std::vector<double> as(a);
  for (auto& v : as) v *= space;
  const double c = std::cbrt(s.t);
  FiniteKernel K(s, *std::min_element(as.begin(), as.end()) - 1,
                 *std::max_element(as.begin(), as.end()) + s.x_cut * c + 1);
  return finite_t_det(K, n, as);
}

double finite_t_cdf(const FiniteTimeSpec& spec, const std::vector<int64_t>& n, const std::vector<double>& a) {
  if (n.size() != a.size() || n.empty()) throw std::invalid_argument("need one threshold per index");
  double space;
  const auto s = normalized(spec, space);
  std::vector<double> as(a);
  for (auto& v : as) v *= space;
  const double c = std::cbrt(s.t), h = s.h * c;
  FiniteKernel K(s, *std::min_element(as.begin(), as.end()) - 2 * h - 1,
                 *std::max_element(as.begin(), as.end()) + s.x_cut * c + 2 * h + 1);
  double v = finite_t_det(K, n, as);
  if (s.flavor == Flavor::stat) {
    if (!(s.lambda - s.rho >= 0.05)) throw std::invalid_argument("stat needs lambda - rho >= 0.05 (relative to lambda)");
    auto shifted = [&](double e) {
      std::vector<double> b(as);
      for (auto& x : b) x += e;
      return finite_t_det(K, n, b);
    };
    const double d1 = (shifted(h) - shifted(-h)) / (2 * h);
    const double d2 = (shifted(h / 2) - shifted(-h / 2)) / h;
    const double pre = 1 / (s.lambda - s.rho);
    if (std::abs(d1 - d2) * pre > 1e-4) throw std::runtime_error("stat derivative prefactor is not Richardson-stable");
    v += pre * (4 * d2 - d1) / 3;
  }
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace kpz
