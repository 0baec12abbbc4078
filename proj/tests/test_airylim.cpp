#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "kpz/airylim.hpp"
#include "kpz/specfun.hpp"

using namespace kpz;

namespace {

// double contour form of the Airy2->1 kernel, for comparison only
double airy2to1_contour(double r1, double s1, double r2, double s2) {
  using cd = std::complex<double>;
  const auto q = gauss_legendre(80, 0, 7);
  std::vector<cd> W, dW, Z, dZ;
  for (int arm = 0; arm < 2; ++arm)
    for (size_t i = 0; i < q.size(); ++i) {
      const double sg = arm ? 1.0 : -1.0;
      const cd ew = std::polar(1.0, sg * 2 * M_PI / 3), ez = std::polar(1.0, -sg * M_PI / 3);
      W.push_back(-1.0 + q.nodes[i] * ew);
      dW.push_back(sg * ew * q.weights[i]);
      Z.push_back(2.0 + q.nodes[i] * ez);
      dZ.push_back(sg * ez * q.weights[i]);
    }
  cd acc = 0;
  for (size_t i = 0; i < W.size(); ++i) {
    const cd fw = std::exp(-(W[i] * W[i] * W[i] / 3.0 + r1 * W[i] * W[i] - s1 * W[i])) * dW[i];
    for (size_t j = 0; j < Z.size(); ++j)
      acc += fw * std::exp(Z[j] * Z[j] * Z[j] / 3.0 + r2 * Z[j] * Z[j] - s2 * Z[j]) * dZ[j] * 2.0 * Z[j] /
             (W[i] * W[i] - Z[j] * Z[j]);
  }
  acc /= cd(0, 2 * M_PI) * cd(0, 2 * M_PI);
  return acc.real() - (r1 < r2 ? heat_kernel(r1, r2, s1, s2) : 0.0);
}

}  // namespace

TEST_CASE("kernel identities at equal times") {
  const LimitSpec a2{LimitProcess::airy2};
  CHECK(kernel_eval(a2, 0, 0.3, 0, -0.4) == doctest::Approx(kernel_eval(a2, 0, -0.4, 0, 0.3)).epsilon(1e-12));
  const double h = 1e-5;
  auto dai = [&](double x) { return (airy_ai(x + h) - airy_ai(x - h)) / (2 * h); };
  const double s1 = 0.3, s2 = -0.4;
  CHECK(kernel_eval(a2, 0, s1, 0, s2) ==
        doctest::Approx((airy_ai(s1) * dai(s2) - dai(s1) * airy_ai(s2)) / (s1 - s2)).epsilon(1e-7));
  CHECK(kernel_eval({LimitProcess::airy1}, 0, s1, 0, s2) == doctest::Approx(airy_ai(s1 + s2)).epsilon(1e-13));
}

TEST_CASE("Airy2->1 kernel matches its double contour form") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ur(-1.5, 1.5), us(-2, 2);
  for (int k = 0; k < 10; ++k) {
    double r1 = ur(rng), r2 = ur(rng);
    if (r1 > r2) std::swap(r1, r2);
    const double s1 = us(rng), s2 = us(rng);
    CHECK(kernel_eval({LimitProcess::airy2to1}, r1, s1, r2, s2) == doctest::Approx(airy2to1_contour(r1, s1, r2, s2)).epsilon(1e-8));
  }
}

TEST_CASE("finite-step kernel approaches the Airy2->BM kernel") {
  double prev = 1e9;
  for (double d : {10.0, 20.0, 40.0}) {
    const double diff = std::abs(kernel_eval({LimitProcess::finite_step, d}, 0, 0.2, 0, -0.3) -
                                 kernel_eval({LimitProcess::airy2tobm}, 0, 0.2, 0, -0.3));
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK(prev < 0.05);
  CHECK_THROWS(cdf_limit({LimitProcess::finite_step, 0.0}, {0}, {0}));
}

TEST_CASE("named distributions") {
  CHECK(f_gue(0) == doctest::Approx(0.969372828355).epsilon(1e-9));
  CHECK(f_goe_2s(0) == doctest::Approx(0.831908066203).epsilon(1e-9));
  LimitOptions hi;
  hi.order = 120;
  CHECK(std::abs(f_gue(0) - f_gue(0, hi)) < 1e-8);
  CHECK(std::abs(f_goe_2s(0) - f_goe_2s(0, hi)) < 1e-8);
  double prev = -1;
  for (double s = -5; s <= 3; s += 0.25) {
    const double v = f_gue(s);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(baik_rains(0) == doctest::Approx(0.5234607316).epsilon(1e-8));
  CHECK(baik_rains(8) >= 1 - 1e-3);
  CHECK(airy_tail_integral(0) == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("Airy2->BM at the origin is the maximum of two GOE variables") {
  for (double s : {-1.0, 0.0, 1.0}) {
    const double g = f_goe(s);
    CHECK(std::abs(cdf_limit({LimitProcess::airy2tobm}, {0}, {s}) - g * g) < 1e-5);
  }
}

TEST_CASE("tails, monotonicity and marginals") {
  const std::vector<LimitSpec> all{{LimitProcess::airy2},     {LimitProcess::airy2prime}, {LimitProcess::airy1},
                                   {LimitProcess::airy2to1},  {LimitProcess::airy2tobm},  {LimitProcess::airybmto1},
                                   {LimitProcess::finite_step, 1.0}};
  for (auto& p : all) {
    CAPTURE(to_string(p.process));
    CHECK(cdf_limit(p, {0}, {10}) >= 1 - 1e-3);
    double prev = -1;
    for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const double v = cdf_limit(p, {0.3}, {s});
      CHECK(v >= prev - 1e-9);
      CHECK(v >= 0);
      CHECK(v <= 1);
      prev = v;
    }
    CHECK(std::abs(cdf_limit(p, {-0.2, 0.4}, {0.1, 10}) - cdf_limit(p, {-0.2}, {0.1})) < 1e-5);
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS(cdf_limit({LimitProcess::airy2}, {0, 1}, {0}));
  CHECK_THROWS(cdf_limit({LimitProcess::airy2}, {0}, {NAN}));
  CHECK_THROWS(cdf_airy_stat({0, 1}, {0, 0}));
  CHECK_THROWS(parse_process("airy3"));
  CHECK(parse_process("airy-stat") == LimitProcess::airy_stat);
}
