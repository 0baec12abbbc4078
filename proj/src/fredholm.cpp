#include "kpz/fredholm.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kpz {

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
  QuadratureRule q;
  q.a = a;
  q.b = b;
  q.nodes.resize(size_t(order));
  q.weights.resize(size_t(order));
  const int n = order;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    const double w = 2 / ((1 - x * x) * dp * dp);
    q.nodes[size_t(i)] = mid - half * x;
    q.nodes[size_t(n - 1 - i)] = mid + half * x;
    q.weights[size_t(i)] = q.weights[size_t(n - 1 - i)] = half * w;
  }
  return q;
}

QuadratureRule map_semiinfinite(const QuadratureRule& unit, double s, double L) {
  if (!(L > 0)) throw std::invalid_argument("map_semiinfinite: L must be positive");
  QuadratureRule q;
  q.a = s;
  q.b = INFINITY;
  for (size_t i = 0; i < unit.size(); ++i) {
    const double u = unit.nodes[i];
    q.nodes.push_back(s + L * u / (1 - u));
    q.weights.push_back(unit.weights[i] * L / ((1 - u) * (1 - u)));
  }
  return q;
}

QuadratureRule semiinfinite_rule(int order, double s, double L, double x_cut) {
  const double uc = x_cut / (L + x_cut);
  auto q = map_semiinfinite(gauss_legendre(order, 0.0, uc), s, L);
  q.b = s + x_cut;
  return q;
}

QuadratureRule composite_gl(double a, double b, int panels, int order) {
  QuadratureRule q;
  q.a = a;
  q.b = b;
  const double h = (b - a) / panels;
  const auto base = gauss_legendre(order, 0.0, h);
  for (int p = 0; p < panels; ++p)
    for (size_t i = 0; i < base.size(); ++i) {
      q.nodes.push_back(a + p * h + base.nodes[i]);
      q.weights.push_back(base.weights[i]);
    }
  return q;
}

MultiPointDomain::MultiPointDomain(std::vector<double> r_, std::vector<double> s_, int order_, double L_, double x_cut_)
    : r(std::move(r_)), s(std::move(s_)), order(order_), L(L_), x_cut(x_cut_) {
  if (r.size() != s.size() || s.empty()) throw std::invalid_argument("MultiPointDomain: r and s must be non-empty and equal length");
  for (size_t k = 1; k < r.size(); ++k)
    if (!(r[k] > r[k - 1])) throw std::invalid_argument("MultiPointDomain: r must be strictly increasing");
}

NodeSet discretize(const MultiPointDomain& d) {
  NodeSet ns;
  const auto unit = gauss_legendre(d.order, 0.0, d.x_cut / (d.L + d.x_cut));
  for (size_t k = 0; k < d.blocks(); ++k) {
    ns.offset.push_back(ns.x.size());
    const auto q = map_semiinfinite(unit, d.s[k], d.L);
    for (size_t i = 0; i < q.size(); ++i) {
      ns.block.push_back(int(k));
      ns.x.push_back(q.nodes[i]);
      ns.w.push_back(q.weights[i]);
    }
  }
  ns.offset.push_back(ns.x.size());
  return ns;
}

Eigen::MatrixXd assemble(const FredholmProblem& p, const NodeSet& ns) {
  if (p.matrix) return p.matrix(ns);
  if (!p.kernel) throw std::invalid_argument("FredholmProblem: no kernel");
  const Eigen::Index n = Eigen::Index(ns.size());
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = p.kernel(ns.block[size_t(i)], ns.x[size_t(i)], ns.block[size_t(j)], ns.x[size_t(j)]);
  return K;
}

namespace {

void check_finite(const Eigen::MatrixXd& K, const NodeSet& ns) {
  for (Eigen::Index j = 0; j < K.cols(); ++j)
    for (Eigen::Index i = 0; i < K.rows(); ++i)
      if (!std::isfinite(K(i, j))) {
        std::ostringstream os;
        os << "non-finite kernel value " << K(i, j) << " at (block " << ns.block[size_t(i)] << ", x=" << ns.x[size_t(i)]
           << ") x (block " << ns.block[size_t(j)] << ", y=" << ns.x[size_t(j)] << ")";
        throw std::runtime_error(os.str());
      }
}

// Osborne diagonal similarity; leaves det(I + A) unchanged and tames conjugation factors
void balance(Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  for (int sweep = 0; sweep < 8; ++sweep) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = A.col(i).norm() - std::abs(A(i, i)) + 1e-300;
      const double r = A.row(i).norm() - std::abs(A(i, i)) + 1e-300;
      if (c < 1e-250 || r < 1e-250) continue;
      const double f = std::sqrt(r / c);
      if (f > 0.5 && f < 2) continue;
      A.row(i) /= f;
      A.col(i) *= f;
      changed = true;
    }
    if (!changed) break;
  }
}

}  // namespace

double det_from_matrix(const Eigen::MatrixXd& K, const NodeSet& ns) {
  check_finite(K, ns);
  const Eigen::Index n = K.rows();
  Eigen::VectorXd sw(n);
  for (Eigen::Index i = 0; i < n; ++i) sw(i) = std::sqrt(ns.w[size_t(i)]);
  Eigen::MatrixXd A = -(sw.asDiagonal() * K * sw.asDiagonal());
  balance(A);
  A.diagonal().array() += 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(A).determinant();
}

double fredholm_det(const FredholmProblem& p) {
  const auto ns = discretize(p.domain);
  return det_from_matrix(assemble(p, ns), ns);
}

Eigen::VectorXd resolvent_apply(const Eigen::MatrixXd& K, const NodeSet& ns, const Eigen::VectorXd& rhs) {
  check_finite(K, ns);
  const Eigen::Index n = K.rows();
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = ns.w[size_t(i)];
  Eigen::MatrixXd A = -(K * w.asDiagonal());
  A.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rc = lu.rcond();
  if (!(rc > 1e-14)) throw std::runtime_error("resolvent_apply: singular system (rcond " + std::to_string(rc) + ")");
  Eigen::VectorXd u = lu.solve(rhs);
  const double res = (A * u - rhs).norm(), scale = rhs.norm() + 1e-300;
  if (res > 1e-10 * scale) throw std::runtime_error("resolvent_apply: residual " + std::to_string(res / scale));
  return u;
}

Eigen::VectorXd resolvent_apply(const FredholmProblem& p, const Eigen::VectorXd& rhs) {
  const auto ns = discretize(p.domain);
  return resolvent_apply(assemble(p, ns), ns, rhs);
}

}  // namespace kpz
