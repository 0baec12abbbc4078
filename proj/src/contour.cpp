#include "kpz/contour.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpz/fredholm.hpp"
#include "kpz/specfun.hpp"

namespace kpz {

std::vector<ContourNode> wedge_arm(double vertex, double angle, double U, int panels, int order, double first) {
  const cplx e = std::polar(1.0, angle);
  const double width = U / panels;
  // panels double in width from `first` until they reach the uniform width
  std::vector<double> cuts{0.0};
  for (double w = std::min(first, width); cuts.back() + w < U; w = std::min(2 * w, width)) cuts.push_back(cuts.back() + w);
  cuts.push_back(U);
  std::vector<ContourNode> out;
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    const auto q = gauss_legendre(order, cuts[p], cuts[p + 1]);
    for (size_t i = 0; i < q.size(); ++i) out.push_back({vertex + q.nodes[i] * e, q.weights[i] * e});
  }
  return out;
}

double arm_extent(const std::function<cplx(cplx)>& logf, double vertex, double angle, double step, double drop,
                  double u_max) {
  const cplx e = std::polar(1.0, angle);
  double peak = logf(vertex).real(), u = 0;
  while (u < u_max) {
    u += step;
    const double v = logf(vertex + u * e).real();
    if (!std::isfinite(v) && v > 0) throw std::runtime_error("contour integrand overflows along the arm");
    peak = std::max(peak, v);
    if (v < peak - drop) return u;
  }
  throw std::runtime_error("contour integrand does not decay along the arm");
}

double wedge_integral(const std::function<cplx(cplx)>& logf, double vertex, double angle, double scale, bool upward,
                      double* imag_residue, double singular_gap) {
  const double step = 0.25 * scale;
  const double U = arm_extent(logf, vertex, angle, step);
  const int panels = std::max(4, int(std::ceil(U / (2 * step))));
  const auto arm = wedge_arm(vertex, angle, U, panels, 10, 0.5 * singular_gap);
  const size_t m = arm.size();
  std::vector<cplx> up(m), down(m);
  double peak = -INFINITY;
  for (size_t i = 0; i < m; ++i) {
    up[i] = logf(arm[i].z);
    down[i] = logf(std::conj(arm[i].z));
    peak = std::max({peak, up[i].real(), down[i].real()});
  }
  // outward along the upper arm, inward along the lower one
  cplx acc = 0;
  for (size_t i = 0; i < m; ++i)
    acc += std::exp(up[i] - peak) * arm[i].dz - std::exp(down[i] - peak) * std::conj(arm[i].dz);
  if (!upward) acc = -acc;
  const cplx val = acc / cplx(0, 2 * M_PI) * std::exp(peak);
  if (imag_residue) *imag_residue = val.imag();
  return val.real();
}

std::vector<ContourNode> lambert_loop(double c, int points) {
  if (!(c > 0 && c < std::exp(-1.0))) throw std::invalid_argument("lambert_loop: radius must lie in (0, 1/e)");
  std::vector<ContourNode> out(static_cast<size_t>(points));
  const double h = 2 * M_PI / points;
  for (int k = 0; k < points; ++k) {
    const double u = (k + 0.5) * h;
    const cplx L = lambert_w0(std::polar(c, u));
    out[size_t(k)] = {L, cplx(0, 1) * L / (1.0 + L) * h};
  }
  return out;
}

std::vector<ContourNode> vertical_line(double c, double Y, int panels, int order) {
  // w = c + i tan(phi) on |phi| <= atan(Y)
  const double pm = std::atan(Y);
  const auto q = composite_gl(-pm, pm, panels, order);
  std::vector<ContourNode> out(q.size());
  for (size_t i = 0; i < q.size(); ++i) {
    const double sc = 1 / std::cos(q.nodes[i]);
    out[i] = {cplx(c, std::tan(q.nodes[i])), cplx(0, q.weights[i] * sc * sc)};
  }
  return out;
}

ChebTable::ChebTable(const std::function<double(double)>& f, double lo, double hi, double panel, int degree)
    : f_(f), lo_(lo), hi_(hi), deg_(degree) {
  if (!(hi > lo)) throw std::invalid_argument("ChebTable: empty range");
  const int panels = std::max(1, int(std::ceil((hi - lo) / panel)));
  width_ = (hi - lo) / panels;
  const int m = deg_ + 1;
  nodes_.resize(size_t(m));
  bw_.resize(size_t(m));
  for (int k = 0; k < m; ++k) {
    const double th = M_PI * (k + 0.5) / m;
    nodes_[size_t(k)] = std::cos(th);
    bw_[size_t(k)] = (k % 2 ? -1.0 : 1.0) * std::sin(th);
  }
  values_.resize(size_t(panels * m));
  for (int p = 0; p < panels; ++p)
    for (int k = 0; k < m; ++k) values_[size_t(p * m + k)] = f(lo + width_ * (p + 0.5 * (nodes_[size_t(k)] + 1)));
}

double ChebTable::operator()(double x) const {
  if (x < lo_ || x > hi_) return f_(x);
  const int m = deg_ + 1;
  const int panels = int(values_.size()) / m;
  const int p = std::min(panels - 1, int((x - lo_) / width_));
  const double u = 2 * (x - lo_ - p * width_) / width_ - 1;
  double num = 0, den = 0;
  for (int k = 0; k < m; ++k) {
    const double d = u - nodes_[size_t(k)];
    if (d == 0) return values_[size_t(p * m + k)];
    const double c = bw_[size_t(k)] / d;
    num += c * values_[size_t(p * m + k)];
    den += c;
  }
  return num / den;
}

}  // namespace kpz
