#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpz/contour.hpp"
#include "kpz/finitet.hpp"

namespace kpz {

namespace {

// (1/2 pi i) int_{c + iR} e^{t w^2/2 + x w} prod_{i<k}(w + m_i) / prod_{i<l}(w + m_i) dw, c right of the poles.
// The line sits at the saddle -x/t; poles it crosses are picked up by a small circle around them.
double f_kl(int k, int l, double x, double t, const std::vector<double>& m) {
  auto integrand = [&](cplx w) {
    cplx v = std::exp(t * w * w / 2.0 + x * w);
    for (int i = 0; i < k - 1; ++i) v *= w + m[size_t(i)];
    for (int i = 0; i < l - 1; ++i) v /= w + m[size_t(i)];
    return v;
  };
  const double saddle = -x / t, gap = 0.5;
  double plo = INFINITY, phi = -INFINITY;
  for (int i = k - 1; i < l - 1; ++i) {
    plo = std::min(plo, -m[size_t(i)]);
    phi = std::max(phi, -m[size_t(i)]);
  }
  const bool poles = k < l;
  const bool crossed = poles && saddle < phi + gap;
  const double c = crossed ? std::min(saddle, plo - gap) : saddle;
  // Gaussian factor falls below 1e-18 of its peak at |Im w| = Y
  const double Y = std::sqrt(2 * 41.5 / t) + 1;
  const int panels = std::max(8, int(std::ceil(Y * (std::abs(x + t * c) + 1) / M_PI)));
  cplx s = 0;
  for (auto& nd : vertical_line(c, Y, panels, 12)) s += integrand(nd.z) * nd.dz;
  if (crossed) {
    const double center = 0.5 * (plo + phi), R = 0.5 * (phi - plo) + 0.5 * gap;
    const int M = 128;
    for (int j = 0; j < M; ++j) {
      const cplx e = std::polar(1.0, 2 * M_PI * j / M);
      s += integrand(center + R * e) * cplx(0, 2 * M_PI / M) * R * e;
    }
  }
  return (s / cplx(0, 2 * M_PI)).real();
}

}  // namespace

double transition_density(const std::vector<double>& zeta, const std::vector<double>& xi, double t,
                          const std::vector<double>& mu) {
  const size_t N = zeta.size();
  if (N == 0 || N > 4) throw std::invalid_argument("transition_density supports 1 <= N <= 4");
  if (xi.size() != N || mu.size() != N) throw std::invalid_argument("transition_density: size mismatch");
  if (!(t > 0)) throw std::invalid_argument("transition_density: t must be positive");
  for (size_t i = 1; i < N; ++i)
    if (zeta[i] < zeta[i - 1] || xi[i] < xi[i - 1]) throw std::invalid_argument("transition_density: outside the Weyl chamber");
  // m_i = mu_{N+1-i}, i = 1..N
  std::vector<double> m(N);
  for (size_t i = 0; i < N; ++i) m[i] = mu[N - 1 - i];
  double pre = 0;
  for (size_t i = 0; i < N; ++i) pre += mu[i] * (xi[i] - zeta[i]) - t * mu[i] * mu[i] / 2;
  Eigen::MatrixXd F(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (size_t k = 1; k <= N; ++k)
    for (size_t l = 1; l <= N; ++l)
      F(Eigen::Index(k - 1), Eigen::Index(l - 1)) = f_kl(int(k), int(l), xi[N - l] - zeta[N - k], t, m);
  return std::exp(pre) * F.determinant();
}

}  // namespace kpz
