#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "kpz/contour.hpp"
#include "kpz/fredholm.hpp"
#include "kpz/paths.hpp"

namespace kpz {

// scaling map between (n, xi) and (r, s)
double scaled_index(double t, double r);  // t + 2 r t^{2/3}
double scaled_position(double t, double r, double s);  // 2t + 2 r t^{2/3} + s t^{1/3}
double unscale_r(double t, double n);
double unscale_s(double t, double r, double xi);

// (1/2 pi i) int e^{t(w^2-1)/2 + xi(w+1)} (-w)^n dw over an upward contour left of 0
double contour_a(double t, double n, double xi, double* imag = nullptr);
// (1/2 pi i) loop around 0 of e^{-t(z^2-1)/2 - xi(z+1)} (-z)^{-n} dz.
// A wedge opening to the right through the saddle; integer n falls back to a circle when the saddle nears 0.
double contour_b(double t, double n, double xi, double* imag = nullptr, bool force_wedge = false);

struct AlphaBeta {
  double alpha = 0, beta = 0;
  double alpha_imag = 0, beta_imag = 0;
};
AlphaBeta alpha_beta(double t, double r, double s);
// pointwise limits of alpha_t and beta_t
double alpha_limit(double r, double s);
double beta_limit(double r, double s);

struct FiniteTimeSpec {
  Flavor flavor = Flavor::packed;
  double t = 1;
  double lambda = 1;
  double rho = 0.5;
  int order = 60;
  double L = 10;      // node map scale, in units of t^{1/3}
  double x_cut = 40;  // truncation beyond each threshold, in units of t^{1/3}
  double h = 1e-4;    // derivative step for stat, in units of t^{1/3}
  int loop_points = 512;
};

// Kernel evaluator in position units, conjugated by e^{xi1 - xi2}.  Tables of the one-variable
// contour integrals are built lazily for xi in [xi_lo, xi_hi]; outside that range they are evaluated directly.
class FiniteKernel {
 public:
  FiniteKernel(const FiniteTimeSpec& spec, double xi_lo, double xi_hi);

  Eigen::MatrixXd block(int64_t n1, const std::vector<double>& x1, int64_t n2, const std::vector<double>& x2) const;
  double operator()(int64_t n1, double xi1, int64_t n2, double xi2) const;

  double a(int64_t n, double xi) const;
  double b(int64_t n, double xi) const;
  // stat and half-stat rank-one factors
  double f(int64_t n, double xi) const;
  double g(int64_t n, double xi) const;
  Eigen::MatrixXd k0(int64_t n1, const std::vector<double>& x1, int64_t n2, const std::vector<double>& x2) const;

  const FiniteTimeSpec& spec() const { return spec_; }

 private:
  struct Tables {
    ChebTable a, b;
    QuadratureRule ya, yg;  // x-integrals against a, and the weighted b-integral of g
  };
  const Tables& tables(int64_t n) const;
  Eigen::MatrixXd phi_part(int64_t n1, const std::vector<double>& x1, int64_t n2, const std::vector<double>& x2) const;
  Eigen::MatrixXd half_flat_part(int64_t n1, const std::vector<double>& x1, int64_t n2, const std::vector<double>& x2,
                                 double loop_radius) const;
  Eigen::MatrixXd stat_flat_extra(int64_t n1, const std::vector<double>& x1, int64_t n2,
                                  const std::vector<double>& x2) const;
  Eigen::MatrixXd flat_part(int64_t n1, const std::vector<double>& x1, int64_t n2, const std::vector<double>& x2) const;

  FiniteTimeSpec spec_;
  double lo_, hi_;
  mutable std::map<int64_t, std::unique_ptr<Tables>> cache_;
};

// t^{1/3} e^{xi1 - xi2} K(n1, xi1; n2, xi2) for the flavor in spec (lambda must be 1)
double kernel_finite(const FiniteTimeSpec& spec, int64_t n1, double xi1, int64_t n2, double xi2);

// det(1 - chi_a K chi_a) with the thresholds a_k attached to indices n_k (strictly increasing)
double finite_t_det(const FiniteKernel& kernel, const std::vector<int64_t>& n, const std::vector<double>& a);
double finite_t_det(const FiniteTimeSpec& spec, const std::vector<int64_t>& n, const std::vector<double>& a);
// P(x_{n_k}(t) <= a_k for all k), including the derivative prefactor for stat
double finite_t_cdf(const FiniteTimeSpec& spec, const std::vector<int64_t>& n, const std::vector<double>& a);

// N-particle transition density with drifts mu, from zeta to xi (both non-decreasing), N <= 4
double transition_density(const std::vector<double>& zeta, const std::vector<double>& xi, double t,
                          const std::vector<double>& mu);

}  // namespace kpz
