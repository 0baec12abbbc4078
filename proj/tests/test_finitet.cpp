#include <cmath>
#include <random>

#include "doctest.h"
#include "kpz/airylim.hpp"
#include "kpz/dynamics.hpp"
#include "kpz/finitet.hpp"
#include "kpz/fredholm.hpp"

using namespace kpz;

namespace {
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
}  // namespace

TEST_CASE("scaling maps") {
  const double t = 27;
  CHECK(scaled_index(t, 1) == doctest::Approx(27 + 2 * 9));
  CHECK(scaled_position(t, 1, 2) == doctest::Approx(54 + 18 + 6));
  CHECK(unscale_r(t, scaled_index(t, 0.3)) == doctest::Approx(0.3));
  CHECK(unscale_s(t, 0.3, scaled_position(t, 0.3, -1.2)) == doctest::Approx(-1.2));
}

TEST_CASE("contour integrals are real and converge to Airy limits") {
  for (double t : {100.0, 1e4}) {
    const auto ab = alpha_beta(t, 0.3, -0.5);
    CHECK(std::abs(ab.alpha_imag) <= 1e-9 * std::abs(ab.alpha));
    CHECK(std::abs(ab.beta_imag) <= 1e-9 * std::abs(ab.beta));
  }
  const auto big = alpha_beta(1e6, 0, 0);
  CHECK(std::abs(big.alpha - 0.355028053887817) < 1e-2);
  CHECK(std::abs(big.beta + 0.355028053887817) < 1e-2);
  CHECK(alpha_limit(0, 0) == doctest::Approx(0.355028053887817));
  double prev = 1e9;
  for (double t : {1e2, 1e3, 1e4}) {
    const double d = std::abs(alpha_beta(t, 0.5, 0.5).alpha - alpha_limit(0.5, 0.5));
    CHECK(d < prev);
    prev = d;
  }
  CHECK(contour_b(10, 0, 1.0) == 0.0);
  CHECK(contour_b(10, -3, 1.0) == 0.0);
}

TEST_CASE("packed first particle is a Brownian motion") {
  FiniteTimeSpec s;
  s.t = 3;
  for (double a : {-2.0, 0.0, 1.5}) CHECK(std::abs(finite_t_cdf(s, {1}, {a}) - normal_cdf(a / std::sqrt(3.0))) < 1e-6);
}

TEST_CASE("packed second particle against the two-particle density") {
  FiniteTimeSpec s;
  s.t = 1;
  const double a = 1;
  // P(x_2 <= a) = int_{x1 <= x2 <= a} r_1
  double p = 0;
  const auto q1 = composite_gl(-12, a, 12, 16);
  for (size_t i = 0; i < q1.size(); ++i) {
    const auto q2 = gauss_legendre(40, q1.nodes[i], a);
    for (size_t j = 0; j < q2.size(); ++j)
      p += q1.weights[i] * q2.weights[j] * transition_density({0, 0}, {q1.nodes[i], q2.nodes[j]}, 1, {0, 0});
  }
  CHECK(std::abs(finite_t_cdf(s, {2}, {a}) - p) < 1e-6);
}

TEST_CASE("transition density") {
  CHECK(transition_density({0.5}, {1.2}, 2, {0}) ==
        doctest::Approx(std::exp(-0.49 / 4) / std::sqrt(4 * M_PI)).epsilon(1e-8));
  // drifted pair: mass over the chamber
  double m = 0;
  const std::vector<double> mu{0.3, -0.2};
  const auto q1 = composite_gl(-10, 10, 20, 12);
  for (size_t i = 0; i < q1.size(); ++i) {
    const auto q2 = composite_gl(q1.nodes[i], q1.nodes[i] + 14, 14, 12);
    for (size_t j = 0; j < q2.size(); ++j)
      m += q1.weights[i] * q2.weights[j] * transition_density({-0.5, 0.2}, {q1.nodes[i], q2.nodes[j]}, 1.5, mu);
  }
  CHECK(m == doctest::Approx(1).epsilon(1e-6));
  CHECK_THROWS(transition_density({0, 0}, {1, 0}, 1, {0, 0}));
  CHECK_THROWS(transition_density({0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, 1, {0, 0, 0, 0, 0}));
}

TEST_CASE("kernel structure") {
  FiniteTimeSpec p;
  p.t = 25;
  FiniteTimeSpec st = p;
  st.flavor = Flavor::stat;
  st.lambda = 1;
  st.rho = 0.5;
  FiniteKernel kp(p, 30, 70), ks(st, 30, 70);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(40, 60);
  std::uniform_int_distribution<int> un(20, 30);
  for (int k = 0; k < 5; ++k) {
    const int64_t n1 = un(rng), n2 = un(rng);
    const double x1 = ux(rng), x2 = ux(rng);
    const double diff = ks(n1, x1, n2, x2) - kp(n1, x1, n2, x2);
    CHECK(std::abs(diff - 0.5 * ks.f(n1, x1) * ks.g(n2, x2)) < 1e-8);
  }
  // phi between neighbours is the indicator times the conjugation e^{xi1 - xi2}
  FiniteKernel k1(p, 0, 50);
  const double with = k1(3, 1.0, 4, 2.0), without = k1(3, 2.0, 4, 1.0);
  const auto k0a = k1.k0(3, {1.0}, 4, {2.0}), k0b = k1.k0(3, {2.0}, 4, {1.0});
  CHECK(with - k0a(0, 0) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::abs(without - k0b(0, 0)) < 1e-14);
}

TEST_CASE("packed kernel near the Airy kernel at large time") {
  const double t = 1e4, s1 = 0.2, s2 = -0.3;
  const int64_t n = int64_t(t);
  FiniteTimeSpec p;
  p.t = t;
  const double v = kernel_finite(p, n, scaled_position(t, 0, s1), n, scaled_position(t, 0, s2));
  CHECK(std::abs(v - kernel_eval({LimitProcess::airy2}, 0, s1, 0, s2)) < 1e-2);
}

TEST_CASE("packed one-point law moves toward GUE") {
  double prev = 1;
  for (double t : {25.0, 100.0, 400.0}) {
    FiniteTimeSpec p;
    p.t = t;
    const int64_t n = int64_t(t);
    double d = 0;
    for (double s : {-2.0, 0.0, 2.0}) d = std::max(d, std::abs(finite_t_cdf(p, {n}, {scaled_position(t, 0, s)}) - f_gue(s)));
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("finite-time mean agrees with Monte Carlo") {
  const double t = 25;
  FiniteTimeSpec p;
  p.t = t;
  FiniteKernel k(p, scaled_position(t, 0, -8), scaled_position(t, 0, 6));
  // E s = int_0^inf (1 - F) - int_-inf^0 F on the scaled axis
  double mean = 0;
  const auto q = composite_gl(-8, 6, 14, 8);
  for (size_t i = 0; i < q.size(); ++i) {
    const double F = finite_t_det(k, {25}, {scaled_position(t, 0, q.nodes[i])});
    mean += q.weights[i] * (q.nodes[i] < 0 ? -F : 1 - F);
  }
  SimulationSpec sim;
  sim.t = t;
  sim.r = {0};
  sim.samples = 5000;
  sim.seed = 31;
  const auto rows = rescaled_samples(sim);
  double m = 0, v = 0;
  for (auto& r : rows) m += r[0].value;
  m /= double(rows.size());
  for (auto& r : rows) v += (r[0].value - m) * (r[0].value - m);
  const double se = std::sqrt(v / double(rows.size()) / double(rows.size()));
  CHECK(std::abs(m - mean) < 4 * se);
}

TEST_CASE("index and parameter validation") {
  FiniteTimeSpec p;
  p.t = 4;
  CHECK_THROWS(finite_t_cdf(p, {3, 2}, {0, 0}));
  CHECK_THROWS(finite_t_cdf(p, {0}, {0}));
  CHECK_THROWS(finite_t_cdf(p, {1, 2}, {0}));
  FiniteTimeSpec s = p;
  s.flavor = Flavor::stat;
  s.lambda = 0.5;
  s.rho = 0.5;
  CHECK_THROWS(finite_t_cdf(s, {2}, {0}));
}
