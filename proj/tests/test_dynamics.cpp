#include <cmath>

#include "doctest.h"
#include "kpz/dynamics.hpp"

using namespace kpz;

TEST_CASE("integer part rounds halves down") {
  CHECK(integer_part(2.5) == 2);
  CHECK(integer_part(2.51) == 3);
  CHECK(integer_part(-0.5) == -1);
  CHECK(integer_part(3.0) == 3);
}

TEST_CASE("leftmost particle is unreflected") {
  const TimeGrid g(1.0, 50);
  const auto p = sample_paths(3, g, {1, 4});
  const auto ic = make_initial_condition(Flavor::flat, {}, {1, 4}, 3);
  const auto tr = evolve_skorokhod(ic, p, {});
  const auto B = p.cumulative(1);
  for (int j = 0; j <= g.n_steps; ++j) CHECK(tr.at(1, j) == doctest::Approx(1 + B[size_t(j)]).epsilon(1e-14));
  for (int64_t n = 2; n <= 4; ++n)
    for (int j = 0; j <= g.n_steps; ++j) CHECK(tr.at(n, j) >= tr.at(n - 1, j) - 1e-12);
}

TEST_CASE("two-particle running maximum by hand") {
  const TimeGrid g(3.0, 3);
  const auto p = sample_paths(11, g, {1, 2});
  const auto ic = make_initial_condition(Flavor::packed, {}, {1, 2}, 0);
  const auto tr = evolve_skorokhod(ic, p, {});
  const auto B1 = p.cumulative(1), B2 = p.cumulative(2);
  for (int j = 0; j <= 3; ++j) {
    double m = -1e300;
    for (int i = 0; i <= j; ++i) m = std::max(m, B1[size_t(i)] - B2[size_t(i)]);
    CHECK(tr.at(2, j) == doctest::Approx(B2[size_t(j)] + m).epsilon(1e-13));
  }
}

TEST_CASE("variational formula agrees with the reflection recursion") {
  const TimeGrid g(2.0, 400);
  for (auto f : {Flavor::packed, Flavor::flat}) {
    const IndexRange range{1, 5};
    const auto p = sample_paths(21, g, range);
    const auto ic = make_initial_condition(f, {}, range, 21);
    const auto tr = evolve_skorokhod(ic, p, {});
    for (int64_t n : {2, 5}) CHECK(variational_value(p, ic, 1, n, 2.0) == doctest::Approx(tr.at(n, g.n_steps)).epsilon(1e-10));
    const auto B = p.cumulative(3);
    CHECK(variational_value(p, ic, 3, 3, 2.0) == doctest::Approx(ic.at(3) + B.back()).epsilon(1e-12));
  }
}

TEST_CASE("truncated infinite systems") {
  TruncationSetup s;
  s.flavor = Flavor::flat;
  s.seed = 4;
  s.grid = TimeGrid(1.0, 200);
  const auto r = evolve_truncated_infinite(s, {0}, {200}, 1e-9);
  CHECK(r.converged);
  CHECK(r.M_used <= 64);
  s.flavor = Flavor::packed;
  const auto q = evolve_truncated_infinite(s, {3}, {200}, 1e-9);
  CHECK(q.M_used == 0);
  s.flavor = Flavor::stat;
  s.params = {1, 1};
  const auto a = evolve_truncated_infinite(s, {0}, {200}, 1e-9);
  CHECK(a.converged);
  s.M_max *= 2;
  const auto b = evolve_truncated_infinite(s, {0}, {200}, 1e-9);
  CHECK(a.values[0] == b.values[0]);
}

TEST_CASE("exit point") {
  const TimeGrid g1(1.0, 1);
  const auto p1 = sample_paths(5, g1, {0, 1});
  const auto ic1 = make_initial_condition(Flavor::half_stat, {1, 1}, {0, 1}, 5);
  const auto e1 = exit_point(p1, ic1, 1.0, 1, 1.0);
  CHECK((e1.Z == 0.0 || e1.Z == 1.0));
  const TimeGrid g(4.0, 400);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = sample_paths(seed, g, {0, 6});
    const auto ic = make_initial_condition(Flavor::half_stat, {1, 1}, {0, 6}, seed);
    const auto e = exit_point(p, ic, 1.0, 6, 4.0);
    CHECK(e.Z >= 0);
    CHECK(e.Z <= 4.0);
  }
}

TEST_CASE("sampling is deterministic") {
  SimulationSpec s;
  s.flavor = Flavor::half_flat;
  s.t = 4;
  s.r = {0, 0.5};
  s.samples = 16;
  s.seed = 99;
  const auto a = rescaled_samples(s), b = rescaled_samples(s);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < 2; ++k) CHECK(a[i][k].value == b[i][k].value);
  s.r = {-10};
  CHECK_THROWS(rescaled_samples(s));
}
