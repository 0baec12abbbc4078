#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpz {

struct TimeGrid {
  double t_end = 1.0;
  int n_steps = 1;

  TimeGrid() = default;
  TimeGrid(double t_end, int n_steps);
  // grid with step as close to dt as possible from below
  static TimeGrid with_dt(double t_end, double dt);

  double dt() const { return t_end / n_steps; }
  double time(int j) const { return j == n_steps ? t_end : j * dt(); }
  // index of a grid time, throws if t is not on the grid
  int index_of(double t) const;
};

struct IndexRange {
  int64_t lo = 1, hi = 1;
  int64_t size() const { return hi - lo + 1; }
  bool contains(int64_t n) const { return n >= lo && n <= hi; }
};

class BrownianPaths {
 public:
  BrownianPaths(uint64_t seed, TimeGrid grid, IndexRange range);

  const TimeGrid& grid() const { return grid_; }
  IndexRange range() const { return range_; }
  uint64_t seed() const { return seed_; }

  // increment over step j (1..n_steps), variance dt
  double increment(int64_t n, int j) const { return inc_[row(n) + j - 1]; }
  const double* increments(int64_t n) const { return &inc_[row(n)]; }
  // uniform variate attached to (n, j), used for bridge maxima
  const double* uniforms(int64_t n) const { return &uni_[row(n)]; }
  // B_n(t_j) with B_n(0) = 0
  std::vector<double> cumulative(int64_t n) const;

 private:
  size_t row(int64_t n) const;
  uint64_t seed_;
  TimeGrid grid_;
  IndexRange range_;
  std::vector<double> inc_, uni_;
};

BrownianPaths sample_paths(uint64_t seed, const TimeGrid& grid, IndexRange range);

enum class Flavor { packed, flat, stat, half_flat, half_stat, stat_flat };

Flavor parse_flavor(const std::string& s);
std::string to_string(Flavor f);

struct IcParams {
  double lambda = 1.0;
  double rho = 1.0;
};

struct HeightVector {
  Flavor flavor = Flavor::packed;
  IndexRange range;
  std::vector<double> zeta;
  IcParams params;

  double at(int64_t n) const { return zeta.at(size_t(n - range.lo)); }
};

// standard exponential attached to (seed, "ic", n)
double ic_exponential(uint64_t seed, int64_t n);

HeightVector make_initial_condition(Flavor flavor, IcParams params, IndexRange range, uint64_t seed);

struct AdmissibilityReport {
  double worst_margin = 0;
  bool pass = false;
};

AdmissibilityReport admissibility_diagnostic(const HeightVector& zeta, double chi);

}  // namespace kpz
