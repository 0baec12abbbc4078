#include "kpz/paths.hpp"

#include <algorithm>
#include <cmath>

#include "kpz/rng.hpp"

namespace kpz {

TimeGrid::TimeGrid(double t_end_, int n_steps_) : t_end(t_end_), n_steps(n_steps_) {
  if (!(t_end > 0) || !std::isfinite(t_end)) throw std::invalid_argument("TimeGrid: t_end must be finite and positive");
  if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
}

TimeGrid TimeGrid::with_dt(double t_end, double dt) {
  if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("TimeGrid: non-finite dt");
  return TimeGrid(t_end, std::max(1, int(std::ceil(t_end / dt - 1e-9))));
}

int TimeGrid::index_of(double t) const {
  const double x = t / dt();
  const int j = int(std::lround(x));
  if (j < 0 || j > n_steps || std::abs(x - j) > 1e-9 * std::max(1.0, x))
    throw std::invalid_argument("time " + std::to_string(t) + " is not on the grid");
  return j;
}

BrownianPaths::BrownianPaths(uint64_t seed, TimeGrid grid, IndexRange range)
    : seed_(seed), grid_(grid), range_(range) {
  if (range.size() < 1) throw std::invalid_argument("sample_paths: empty index range");
  if (!std::isfinite(grid.dt())) throw std::invalid_argument("sample_paths: non-finite dt");
  const size_t m = size_t(grid.n_steps);
  inc_.resize(size_t(range.size()) * m);
  uni_.resize(inc_.size());
  const Philox gen(seed);
  const double sd = std::sqrt(grid.dt());
  for (int64_t n = range.lo; n <= range.hi; ++n) {
    double* out = &inc_[row(n)];
    double* uo = &uni_[row(n)];
    for (size_t j = 0; j < m; ++j) {
      const auto w = gen.at(kStreamPath, n, j);
      out[j] = sd * box_muller(u53(w[0], w[1]), u32(w[2]));
      uo[j] = u32(w[3]);
    }
  }
}

size_t BrownianPaths::row(int64_t n) const {
  if (!range_.contains(n)) throw std::out_of_range("BrownianPaths: index " + std::to_string(n) + " outside range");
  return size_t(n - range_.lo) * size_t(grid_.n_steps);
}

std::vector<double> BrownianPaths::cumulative(int64_t n) const {
  std::vector<double> b(size_t(grid_.n_steps) + 1, 0.0);
  const double* d = increments(n);
  for (int j = 0; j < grid_.n_steps; ++j) b[j + 1] = b[j] + d[j];
  return b;
}

BrownianPaths sample_paths(uint64_t seed, const TimeGrid& grid, IndexRange range) {
  return BrownianPaths(seed, grid, range);
}

Flavor parse_flavor(const std::string& s) {
  if (s == "packed") return Flavor::packed;
  if (s == "flat") return Flavor::flat;
  if (s == "stat") return Flavor::stat;
  if (s == "half-flat") return Flavor::half_flat;
  if (s == "half-stat") return Flavor::half_stat;
  if (s == "stat-flat") return Flavor::stat_flat;
  throw std::invalid_argument("unknown flavor '" + s + "'");
}

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::packed: return "packed";
    case Flavor::flat: return "flat";
    case Flavor::stat: return "stat";
    case Flavor::half_flat: return "half-flat";
    case Flavor::half_stat: return "half-stat";
    case Flavor::stat_flat: return "stat-flat";
  }
  return "?";
}

double ic_exponential(uint64_t seed, int64_t n) {
  const auto w = Philox(seed).at(kStreamIC, n, 0);
  return -std::log(u53(w[0], w[1]));
}

HeightVector make_initial_condition(Flavor flavor, IcParams p, IndexRange range, uint64_t seed) {
  if (range.size() < 1) throw std::invalid_argument("make_initial_condition: empty index range");
  HeightVector h{flavor, range, std::vector<double>(size_t(range.size())), p};
  auto set = [&](int64_t n, double v) {
    if (range.contains(n)) h.zeta[size_t(n - range.lo)] = v;
  };
  switch (flavor) {
    case Flavor::packed:
      break;
    case Flavor::flat:
    case Flavor::half_flat:
      for (int64_t n = range.lo; n <= range.hi; ++n) set(n, double(n));
      break;
    case Flavor::stat: {
      if (!(p.lambda > 0)) throw std::invalid_argument("stat: lambda must be positive");
      if (range.lo < 0 && !(p.rho > 0)) throw std::invalid_argument("stat: rho must be positive for negative indices");
      double z = 0;
      for (int64_t n = 1; n <= range.hi; ++n) set(n, z += ic_exponential(seed, n) / p.lambda);
      z = 0;
      set(0, 0.0);
      for (int64_t n = 0; n > range.lo; --n) set(n - 1, z -= ic_exponential(seed, n) / p.rho);
      break;
    }
    case Flavor::half_stat: {
      if (!(p.lambda > 0)) throw std::invalid_argument("half-stat: lambda must be positive");
      if (range.lo < 0) throw std::invalid_argument("half-stat: indices start at 0");
      double z = 0;
      for (int64_t n = 0; n <= range.hi; ++n) set(n, z += ic_exponential(seed, n) / p.lambda);
      break;
    }
    case Flavor::stat_flat: {
      for (int64_t n = std::max<int64_t>(1, range.lo); n <= range.hi; ++n) set(n, double(n));
      if (range.lo < 1 && !(p.rho > 0)) throw std::invalid_argument("stat-flat: rho must be positive");
      double z = 1;
      for (int64_t n = 1; n > range.lo; --n) set(n - 1, z -= ic_exponential(seed, n) / p.rho);
      break;
    }
  }
  return h;
}

AdmissibilityReport admissibility_diagnostic(const HeightVector& h, double chi) {
  if (!(chi > 0.5)) throw std::invalid_argument("admissibility: chi must exceed 1/2");
  const int64_t n = std::min<int64_t>(h.range.hi, 0) >= h.range.lo ? std::min<int64_t>(h.range.hi, 0) : h.range.hi;
  const int64_t mmax = n - h.range.lo;
  AdmissibilityReport r;
  if (mmax < 2) return r;
  std::vector<double> margin(size_t(mmax) + 1, 0.0);
  r.worst_margin = INFINITY;
  for (int64_t m = 1; m <= mmax; ++m) {
    margin[size_t(m)] = h.at(n) - h.at(n - m) - std::pow(double(m), chi);
    r.worst_margin = std::min(r.worst_margin, margin[size_t(m)]);
  }
  // the margin has to be positive over the far half of the window and still rising
  bool tail_positive = true;
  for (int64_t m = mmax / 2; m <= mmax; ++m) tail_positive = tail_positive && margin[size_t(m)] > 0;
  r.pass = tail_positive && margin[size_t(mmax)] > margin[size_t(mmax / 2)];
  return r;
}

}  // namespace kpz
