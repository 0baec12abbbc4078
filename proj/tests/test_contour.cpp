#include <cmath>

#include "doctest.h"
#include "kpz/contour.hpp"
#include "kpz/specfun.hpp"

using namespace kpz;

TEST_CASE("wedge integral reproduces the Airy function") {
  // Ai(x) = (1/2 pi i) int e^{w^3/3 - x w} dw from infinity at -pi/3 to infinity at pi/3
  for (double x : {-2.0, 0.0, 1.5}) {
    double im = 1;
    const double v = wedge_integral([x](cplx w) { return w * w * w / 3.0 - x * w; }, 0.5, M_PI / 3, 1.0, true, &im);
    CHECK(v == doctest::Approx(airy_ai(x)).epsilon(1e-10));
    CHECK(std::abs(im) < 1e-12);
  }
}

TEST_CASE("Lambert loop encloses the origin once") {
  const auto loop = lambert_loop(0.3, 256);
  cplx s = 0, s2 = 0;
  for (auto& nd : loop) {
    s += nd.dz / nd.z;
    s2 += nd.dz * std::exp(nd.z) / (nd.z * nd.z);
  }
  CHECK(std::abs(s / cplx(0, 2 * M_PI) - 1.0) < 1e-12);
  CHECK(std::abs(s2 / cplx(0, 2 * M_PI) - 1.0) < 1e-12);
  for (auto& nd : loop) CHECK(std::abs(nd.z * std::exp(nd.z)) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS(lambert_loop(0.5, 64));
}

TEST_CASE("vertical line integral of a Gaussian") {
  // (1/2 pi i) int_{c + iR} e^{w^2/2} dw = 1/sqrt(2 pi)
  cplx s = 0;
  for (auto& nd : vertical_line(0.7, 12, 32, 12)) s += nd.dz * std::exp(nd.z * nd.z / 2.0);
  CHECK(std::abs(s / cplx(0, 2 * M_PI) - 1 / std::sqrt(2 * M_PI)) < 1e-12);
}

TEST_CASE("Chebyshev tables") {
  const ChebTable t([](double x) { return std::sin(3 * x) * std::exp(-x * x / 10); }, -4, 4, 0.5);
  for (double x = -4; x <= 4; x += 0.0371) CHECK(std::abs(t(x) - std::sin(3 * x) * std::exp(-x * x / 10)) < 1e-12);
  CHECK(t(7.0) == doctest::Approx(std::sin(21.0) * std::exp(-4.9)).epsilon(1e-14));
}
