#pragma once
#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace kpz {

struct QuadratureRule {
  std::vector<double> nodes, weights;
  double a = 0, b = 0;
  size_t size() const { return nodes.size(); }
};

QuadratureRule gauss_legendre(int order, double a, double b);

// x = s + L u/(1-u) applied to a rule on (0,1)
QuadratureRule map_semiinfinite(const QuadratureRule& unit, double s, double L);

// Gauss-Legendre in u on (0, u_c), u_c chosen so the image ends at s + x_cut
QuadratureRule semiinfinite_rule(int order, double s, double L, double x_cut);

// composite Gauss-Legendre on [a, b] with panels of roughly equal width
QuadratureRule composite_gl(double a, double b, int panels, int order);

struct MultiPointDomain {
  std::vector<double> r, s;
  int order = 60;
  double L = 10;
  double x_cut = 60;  // distance beyond s_k where each block is truncated

  MultiPointDomain() = default;
  MultiPointDomain(std::vector<double> r, std::vector<double> s, int order = 60, double L = 10, double x_cut = 60);
  size_t blocks() const { return s.size(); }
};

// stacked node set over all blocks
struct NodeSet {
  std::vector<int> block;
  std::vector<double> x, w;
  std::vector<size_t> offset;  // first node of each block, plus the total at the end
  size_t size() const { return x.size(); }
};

NodeSet discretize(const MultiPointDomain& d);

using PointKernel = std::function<double(int bi, double x, int bj, double y)>;
// fills the unweighted kernel matrix K(x_i, y_j) for the whole node set
using MatrixKernel = std::function<Eigen::MatrixXd(const NodeSet&)>;

struct FredholmProblem {
  MultiPointDomain domain;
  PointKernel kernel;
  MatrixKernel matrix;  // used when set, faster than pointwise assembly
};

Eigen::MatrixXd assemble(const FredholmProblem& p, const NodeSet& nodes);

// det(I - W^{1/2} K W^{1/2})
double fredholm_det(const FredholmProblem& p);
double det_from_matrix(const Eigen::MatrixXd& K, const NodeSet& nodes);

// solves u - K W u = rhs on the nodes
Eigen::VectorXd resolvent_apply(const FredholmProblem& p, const Eigen::VectorXd& rhs);
Eigen::VectorXd resolvent_apply(const Eigen::MatrixXd& K, const NodeSet& nodes, const Eigen::VectorXd& rhs);

}  // namespace kpz
