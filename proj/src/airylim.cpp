#include "kpz/airylim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpz/specfun.hpp"

namespace kpz {

LimitProcess parse_process(const std::string& s) {
  if (s == "airy2") return LimitProcess::airy2;
  if (s == "airy2prime") return LimitProcess::airy2prime;
  if (s == "airy1") return LimitProcess::airy1;
  if (s == "airy2to1") return LimitProcess::airy2to1;
  if (s == "airy2tobm") return LimitProcess::airy2tobm;
  if (s == "airybmto1") return LimitProcess::airybmto1;
  if (s == "finite-step") return LimitProcess::finite_step;
  if (s == "airy-stat") return LimitProcess::airy_stat;
  throw std::invalid_argument("unknown process '" + s + "'");
}

std::string to_string(LimitProcess p) {
  switch (p) {
    case LimitProcess::airy2: return "airy2";
    case LimitProcess::airy2prime: return "airy2prime";
    case LimitProcess::airy1: return "airy1";
    case LimitProcess::airy2to1: return "airy2to1";
    case LimitProcess::airy2tobm: return "airy2tobm";
    case LimitProcess::airybmto1: return "airybmto1";
    case LimitProcess::finite_step: return "finite-step";
    case LimitProcess::airy_stat: return "airy-stat";
  }
  return "?";
}

namespace {

struct Grid {
  std::vector<double> x, w;
};

Grid cgl(double a, double b) {
  const int panels = std::max(1, int(std::ceil(b - a)));
  const auto q = composite_gl(a, b, panels, 10);
  return {q.nodes, q.weights};
}

// conjugated Airy factors: alpha(r,s) e^{-r x} and -beta(r,s) e^{r x} combine into e^{x(r2-r1)}
double alpha(double r, double s) { return exp_ai(-2.0 / 3.0 * r * r * r - r * s, r * r + s); }
double nbeta(double r, double s) { return exp_ai(2.0 / 3.0 * r * r * r + r * s, r * r + s); }
double alpha_p(double r, double s) { return exp_ai(-r * s, s); }
double nbeta_p(double r, double s) { return exp_ai(r * s, s); }

using Fn = double (*)(double, double);

// M(i,j) = sum_q w_q P(r1, x_i + a y_q) Q(r2, y_j + b y_q)
Eigen::MatrixXd product(Fn P, double r1, const std::vector<double>& x, double a, Fn Q, double r2,
                        const std::vector<double>& y, double b, const Grid& g) {
  const Eigen::Index n1 = Eigen::Index(x.size()), n2 = Eigen::Index(y.size()), G = Eigen::Index(g.x.size());
  Eigen::MatrixXd A(n1, G), B(G, n2);
  for (Eigen::Index q = 0; q < G; ++q) {
    for (Eigen::Index i = 0; i < n1; ++i) A(i, q) = P(r1, x[size_t(i)] + a * g.x[size_t(q)]);
    for (Eigen::Index j = 0; j < n2; ++j) B(q, j) = g.w[size_t(q)] * Q(r2, y[size_t(j)] + b * g.x[size_t(q)]);
  }
  return A * B;
}

double lo_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
double hi_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// upper limit for y beyond which Ai(shift + s + y) is negligible for every node s
double tail_len(double shift_plus_min) { return 32.0 + std::max(0.0, -shift_plus_min); }

// -V 1_{r1<r2} + K_{r1,r2}; shifted form (prime = false) or the unshifted form conjugated by e^{rs}
Eigen::MatrixXd two_time(bool prime, double r1, const std::vector<double>& x, double r2, const std::vector<double>& y) {
  const Fn P = prime ? alpha_p : alpha;
  const Fn Q = prime ? nbeta_p : nbeta;
  const double sh1 = prime ? 0 : r1 * r1, sh2 = prime ? 0 : r2 * r2;
  const double d = r2 - r1;
  if (d >= 1.0) {
    // -V + K equals minus the same integral over the negative half-line
    const double far = std::max(hi_of(x) + sh1, hi_of(y) + sh2);
    const double X = std::max(0.0, far) + 40.0 / d + 10.0;
    const Grid g = cgl(-X, 0.0);
    return -product(P, r1, x, 1, Q, r2, y, 1, g);
  }
  const Grid g = cgl(0.0, tail_len(std::min(lo_of(x) + sh1, lo_of(y) + sh2)));
  Eigen::MatrixXd M = product(P, r1, x, 1, Q, r2, y, 1, g);
  if (d > 0) {
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j = 0; j < M.cols(); ++j) {
        const double s1 = x[size_t(i)], s2 = y[size_t(j)];
        if (!prime) {
          M(i, j) -= heat_kernel(r1, r2, s1, s2);
        } else {
          const double e = r2 * s2 - r1 * s1 + d * d * d / 12 - (s1 + s2) * d / 2 - (s1 - s2) * (s1 - s2) / (4 * d);
          M(i, j) -= std::exp(e) / std::sqrt(4 * M_PI * d);
        }
      }
  }
  return M;
}

// e^{c2-c1} int_0^inf e^{x(r1+r2)} Ai(r1^2+s1-x) Ai(r2^2+s2+x) dx
Eigen::MatrixXd half_flat_term(double r1, const std::vector<double>& x, double r2, const std::vector<double>& y) {
  const double c = r1 + r2;
  if (c <= 0.5) {
    const Grid g = cgl(0.0, tail_len(lo_of(y) + r2 * r2));
    return product(alpha, r1, x, -1, nbeta, r2, y, 1, g);
  }
  // full-line value in closed form minus the mirrored half
  const Grid g = cgl(0.0, tail_len(lo_of(x) + r1 * r1));
  Eigen::MatrixXd M = -product(alpha, r1, x, 1, nbeta, r2, y, -1, g);
  const double k = std::cbrt(0.5);
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const double s1 = x[size_t(i)], s2 = y[size_t(j)];
      const double a = r1 * r1 + s1, b = r2 * r2 + s2;
      const double e = -2.0 / 3.0 * r1 * r1 * r1 - r1 * s1 + 2.0 / 3.0 * r2 * r2 * r2 + r2 * s2 + c * (a - b) / 2;
      M(i, j) += k * exp_ai(e, k * (a + b - c * c / 2));
    }
  return M;
}

double integral(Fn F, double r, double s, double sign, double len) {
  const Grid g = cgl(0.0, len);
  double acc = 0;
  for (size_t q = 0; q < g.x.size(); ++q) acc += g.w[q] * F(r, s + sign * g.x[q]);
  return acc;
}

// f_r(s) = 1 - int_0^inf alpha(r, s+x) dx
double fs_f(double r, double s) { return 1 - integral(alpha, r, s, 1, tail_len(r * r + s)); }

// g_r(s) of the finite-step kernel
double fs_g(double r, double s, double delta) {
  const double c = delta + r;
  const Grid g = c >= 1.0 ? cgl(0.0, std::max(0.0, r * r + s) + 40.0 / c + 10.0) : cgl(0.0, tail_len(r * r + s));
  double acc = 0;
  if (c >= 1.0) {
    for (size_t q = 0; q < g.x.size(); ++q) acc += g.w[q] * std::exp(-delta * g.x[q]) * nbeta(r, s - g.x[q]);
    return acc;
  }
  for (size_t q = 0; q < g.x.size(); ++q) acc += g.w[q] * nbeta(r, s + g.x[q]) * std::exp(delta * g.x[q]);
  return std::exp(delta * delta * delta / 3 + r * delta * delta - s * delta) - acc;
}

Eigen::MatrixXd process_matrix(const LimitSpec& spec, const std::vector<double>& rr, const NodeSet& ns) {
  const size_t m = rr.size();
  std::vector<std::vector<double>> xs(m);
  for (size_t k = 0; k < m; ++k) xs[k].assign(ns.x.begin() + long(ns.offset[k]), ns.x.begin() + long(ns.offset[k + 1]));
  const Eigen::Index n = Eigen::Index(ns.size());
  Eigen::MatrixXd K(n, n);
  // rank-one parts: row factor on block b1, column factor on block b2
  std::vector<Eigen::VectorXd> fr(m), gc(m);
  const auto p = spec.process;
  if (p == LimitProcess::finite_step && !(spec.delta > 0)) throw std::invalid_argument("finite-step needs delta > 0");
  for (size_t k = 0; k < m; ++k) {
    const double r = rr[k];
    const auto& x = xs[k];
    fr[k].setZero(Eigen::Index(x.size()));
    gc[k].setZero(Eigen::Index(x.size()));
    for (size_t i = 0; i < x.size(); ++i) {
      const auto ii = Eigen::Index(i);
      if (p == LimitProcess::airy2tobm) {
        const double base = std::exp(-r * r * r / 3);
        fr[k](ii) = r < -1 ? integral(alpha_p, r, x[i], -1, std::max(0.0, x[i]) + 40.0 / -r + 10.0)
                           : base - integral(alpha_p, r, x[i], 1, tail_len(x[i]));
        gc[k](ii) = nbeta_p(r, x[i]);
      } else if (p == LimitProcess::airybmto1) {
        fr[k](ii) = alpha(r, x[i]);
        gc[k](ii) = 1 - 2 * integral(nbeta, r, x[i], 1, tail_len(r * r + x[i]));
      } else if (p == LimitProcess::finite_step) {
        fr[k](ii) = fs_f(r, x[i]);
        gc[k](ii) = spec.delta * fs_g(r, x[i], spec.delta);
      }
    }
  }
  for (size_t b1 = 0; b1 < m; ++b1)
    for (size_t b2 = 0; b2 < m; ++b2) {
      const double r1 = rr[b1], r2 = rr[b2];
      Eigen::MatrixXd B;
      switch (p) {
        case LimitProcess::airy2:
        case LimitProcess::finite_step:
        case LimitProcess::airy_stat: B = two_time(false, r1, xs[b1], r2, xs[b2]); break;
        case LimitProcess::airy2prime:
        case LimitProcess::airy2tobm: B = two_time(true, r1, xs[b1], r2, xs[b2]); break;
        case LimitProcess::airy2to1:
        case LimitProcess::airybmto1:
          B = two_time(false, r1, xs[b1], r2, xs[b2]) + half_flat_term(r1, xs[b1], r2, xs[b2]);
          break;
        case LimitProcess::airy1: {
          const double d = r2 - r1;
          B.resize(Eigen::Index(xs[b1].size()), Eigen::Index(xs[b2].size()));
          for (Eigen::Index i = 0; i < B.rows(); ++i)
            for (Eigen::Index j = 0; j < B.cols(); ++j) {
              const double s1 = xs[b1][size_t(i)], s2 = xs[b2][size_t(j)];
              B(i, j) = exp_ai(d * (s1 + s2) + 2.0 / 3.0 * d * d * d, s1 + s2 + d * d);
              if (d > 0) B(i, j) -= heat_kernel(r1, r2, s1, s2);
            }
          break;
        }
      }
      if (p == LimitProcess::airy2tobm || p == LimitProcess::airybmto1 || p == LimitProcess::finite_step)
        B += fr[b1] * gc[b2].transpose();
      K.block(Eigen::Index(ns.offset[b1]), Eigen::Index(ns.offset[b2]), B.rows(), B.cols()) = B;
    }
  return K;
}

MultiPointDomain domain_for(const LimitSpec& spec, const std::vector<double>& r, const std::vector<double>& s,
                            const LimitOptions& opt) {
  double x_cut = opt.x_cut, L = opt.L;
  if (spec.process == LimitProcess::finite_step) {
    // the rank-one part only decays like e^{-delta s}
    x_cut = std::max(x_cut, 40.0 / spec.delta);
    L = std::max(L, x_cut / 6);
  }
  return MultiPointDomain(r, s, opt.order, L, x_cut);
}

void check_args(const std::vector<double>& r, const std::vector<double>& s) {
  if (r.empty() || r.size() != s.size()) throw std::invalid_argument("r and s lists must be non-empty and of equal length");
  for (size_t k = 0; k < r.size(); ++k)
    if (!std::isfinite(r[k]) || !std::isfinite(s[k])) throw std::invalid_argument("non-finite r or s");
}

double clip(double v) {
  if (v < -1e-6 || v > 1 + 1e-6) return std::clamp(v, 0.0, 1.0);  // caller-visible via the report
  return std::clamp(v, 0.0, 1.0);
}

std::vector<double> shifted(std::vector<double> s, double h) {
  for (double& v : s) v += h;
  return s;
}

}  // namespace

double kernel_eval(const LimitSpec& spec, double r1, double s1, double r2, double s2) {
  NodeSet ns;
  std::vector<double> rr;
  if (r1 == r2) {
    ns.block = {0, 0};
    ns.x = {s1, s2};
    ns.w = {1, 1};
    ns.offset = {0, 2};
    rr = {r1};
    return process_matrix(spec, rr, ns)(0, 1);
  }
  ns.block = {0, 1};
  ns.x = {s1, s2};
  ns.w = {1, 1};
  ns.offset = {0, 1, 2};
  rr = {r1, r2};
  if (r1 < r2) return process_matrix(spec, rr, ns)(0, 1);
  // blocks must be stored in increasing r; read the transposed entry
  rr = {r2, r1};
  ns.x = {s2, s1};
  return process_matrix(spec, rr, ns)(1, 0);
}

double limit_det(const LimitSpec& spec, const std::vector<double>& r, const std::vector<double>& s, const LimitOptions& opt) {
  check_args(r, s);
  FredholmProblem fp;
  fp.domain = domain_for(spec, r, s, opt);
  fp.matrix = [&](const NodeSet& ns) { return process_matrix(spec, r, ns); };
  return fredholm_det(fp);
}

double cdf_limit(const LimitSpec& spec, const std::vector<double>& r, const std::vector<double>& s, const LimitOptions& opt) {
  if (spec.process == LimitProcess::airy_stat) return cdf_airy_stat(r, s, opt);
  if (spec.process != LimitProcess::finite_step) return clip(limit_det(spec, r, s, opt));
  const double h = opt.h;
  const double d0 = limit_det(spec, r, s, opt);
  const double dp = limit_det(spec, r, shifted(s, h), opt), dm = limit_det(spec, r, shifted(s, -h), opt);
  return clip(d0 + (dp - dm) / (2 * h) / spec.delta);
}

namespace {

// G(s) det(1 - P_s K) for the one-point airy-stat formula
double airy_stat_gdet(double r, double s, const LimitOptions& opt) {
  FredholmProblem fp;
  fp.domain = MultiPointDomain({r}, {s}, opt.order, opt.L, opt.x_cut);
  const auto ns = discretize(fp.domain);
  const Eigen::MatrixXd K = two_time(false, r, ns.x, r, ns.x);
  const Eigen::Index n = K.rows();
  Eigen::VectorXd w(n), fstar(n), g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = ns.x[size_t(i)];
    w(i) = ns.w[size_t(i)];
    fstar(i) = -integral(alpha, r, x, 1, tail_len(r * r + x));
    g(i) = 1 - integral(nbeta, r, x, 1, tail_len(r * r + x));
  }
  const Grid gr = cgl(0.0, tail_len(r * r + s));
  double R = s;
  for (size_t q = 0; q < gr.x.size(); ++q) R += gr.w[q] * gr.x[q] * nbeta(r, s + gr.x[q]);
  // G det(1 - K) as one bordered determinant; no solve, so it stays finite where 1 - K is nearly singular
  Eigen::MatrixXd B(n + 1, n + 1);
  B.topLeftCorner(n, n) = -(K * w.asDiagonal());
  B.topLeftCorner(n, n).diagonal().array() += 1.0;
  B.topRightCorner(n, 1) = fstar + K * w;
  B.bottomLeftCorner(1, n) = (g.array() * w.array()).matrix().transpose();
  B(n, n) = R;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(B).determinant();
}

}  // namespace

double cdf_airy_stat(const std::vector<double>& r, const std::vector<double>& s, const LimitOptions& opt) {
  check_args(r, s);
  if (r.size() != 1) throw std::invalid_argument("cdf_airy_stat: only one-point distributions are supported");
  const double h = opt.h;
  return clip((airy_stat_gdet(r[0], s[0] + h, opt) - airy_stat_gdet(r[0], s[0] - h, opt)) / (2 * h));
}

double f_gue(double s, const LimitOptions& opt) { return cdf_limit({LimitProcess::airy2}, {0.0}, {s}, opt); }
double f_goe_2s(double s, const LimitOptions& opt) { return cdf_limit({LimitProcess::airy1}, {0.0}, {s}, opt); }
double f_goe(double s, const LimitOptions& opt) { return f_goe_2s(s / 2, opt); }
double baik_rains(double s, const LimitOptions& opt) { return cdf_airy_stat({0.0}, {s}, opt); }

double airy_tail_integral(double s) { return integral(alpha_p, 0.0, s, 1, tail_len(s)); }

double heat_airy(double d, double a, double b) {
  if (!(d > 0)) throw std::domain_error("heat_airy: d must be positive");
  return std::exp(d * d * d / 12 - (a + b) * d / 2 - (a - b) * (a - b) / (4 * d)) / std::sqrt(4 * M_PI * d);
}

}  // namespace kpz
