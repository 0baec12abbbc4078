#pragma once
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace kpz {

using cplx = std::complex<double>;

// node z with its complex weight dz, so that sum f(z) dz approximates a contour integral
struct ContourNode {
  cplx z, dz;
};

// upper arm v + u e^{i angle}, u in [0, U]; the lower arm is the mirror image.
// Panels start at width `first` and double up to U / panels.
std::vector<ContourNode> wedge_arm(double vertex, double angle, double U, int panels, int order = 10,
                                   double first = INFINITY);

// length of the arm before Re log f falls `drop` below its running maximum; step is the probing step
double arm_extent(const std::function<cplx(cplx)>& logf, double vertex, double angle, double step, double drop = 40,
                  double u_max = 1e3);

// (1/2 pi i) int over the symmetric wedge of e^{logf}; the imaginary part is reported separately
// upward = true: from infinity at -angle to infinity at +angle through the vertex.
// singular_gap: distance from the vertex to the nearest singularity, used to refine the panels there
double wedge_integral(const std::function<cplx(cplx)>& logf, double vertex, double angle, double scale,
                      bool upward, double* imag_residue = nullptr, double singular_gap = INFINITY);

// counter-clockwise loop z = L0(c e^{iu}), trapezoid rule in u
std::vector<ContourNode> lambert_loop(double c, int points);

// vertical line Re w = c, |Im w| <= Y, Gauss-Legendre panels; dz includes the factor i
std::vector<ContourNode> vertical_line(double c, double Y, int panels, int order = 10);

// piecewise Chebyshev interpolant of a smooth real function on [lo, hi]
class ChebTable {
 public:
  ChebTable() = default;
  ChebTable(const std::function<double(double)>& f, double lo, double hi, double panel, int degree = 16);
  double operator()(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  std::function<double(double)> f_;
  double lo_ = 0, hi_ = 0, width_ = 1;
  int deg_ = 16;
  std::vector<double> nodes_, bw_, values_;
};

}  // namespace kpz
