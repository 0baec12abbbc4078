#pragma once
#include <optional>
#include <vector>

#include "kpz/paths.hpp"

namespace kpz {

struct EvolveOptions {
  std::optional<double> leftmost_drift;
  // sample the maximum of the reflector-minus-driver bridge inside each step
  bool bridge = false;
};

struct TrajectorySet {
  IndexRange range;
  TimeGrid grid;
  std::vector<double> x;  // row per index, n_steps+1 columns
  int64_t truncation_M = 0;
  bool converged = true;

  double at(int64_t n, int j) const {
    return x[size_t(n - range.lo) * size_t(grid.n_steps + 1) + size_t(j)];
  }
  const double* row(int64_t n) const { return &x[size_t(n - range.lo) * size_t(grid.n_steps + 1)]; }
};

TrajectorySet evolve_skorokhod(const HeightVector& ic, const BrownianPaths& paths, const EvolveOptions& opt = {});

// positions at the final grid time only, for the requested indices
std::vector<double> evolve_final(const HeightVector& ic, const BrownianPaths& paths, const EvolveOptions& opt,
                                 const std::vector<int64_t>& targets, const std::vector<int>& time_index);

// max_k (Y_{k,n}(t) + zeta_k) by one last-passage program per starting level
double variational_value(const BrownianPaths& paths, const HeightVector& ic, int64_t k_min, int64_t n, double t,
                         std::optional<double> leftmost_drift = {});

struct TruncationResult {
  std::vector<double> values;
  int64_t M_used = 0;
  bool converged = false;
};

struct TruncationSetup {
  Flavor flavor = Flavor::flat;
  IcParams params;
  uint64_t seed = 0;
  TimeGrid grid;
  bool bridge = false;
  int64_t M0 = 8;
  int64_t M_max = 4096;
};

// window [-M, max target] enlarged by doubling until two consecutive agreements below tol
TruncationResult evolve_truncated_infinite(const TruncationSetup& s, const std::vector<int64_t>& targets,
                                           const std::vector<int>& time_index, double tol);

struct ExitPointRecord {
  int64_t n = 0;
  double t = 0;
  double Z = 0;
};

// exit time of the maximiser from the boundary line at index 0 (grid valued, smallest on ties)
ExitPointRecord exit_point(const BrownianPaths& paths, const HeightVector& ic, double rho, int64_t n, double t);

// integer part used by the scaled observables: nearest integer, halves rounded down
int64_t integer_part(double v);

struct ScaledSample {
  double r = 0, theta = 0, value = 0;
};

struct SimulationSpec {
  Flavor flavor = Flavor::packed;
  IcParams params;
  double t = 1;
  std::vector<double> r, theta;
  int64_t samples = 1;
  uint64_t seed = 0;
  double dt = 0;  // 0: 1e-3 * t
  bool bridge = true;
};

// one row per replica, one entry per (r, theta) pair; replicas run in parallel
std::vector<std::vector<ScaledSample>> rescaled_samples(const SimulationSpec& spec);

// raw positions x_n(t) for a list of indices; same noise within a replica
std::vector<std::vector<double>> sample_positions(Flavor flavor, IcParams params, double t, const std::vector<int64_t>& n,
                                                  int64_t samples, uint64_t seed, double dt, bool bridge = true);

int64_t min_index(Flavor f);

struct BurkeReport {
  double rho = 1, t = 0;
  int64_t samples = 0;
  double sup_mean = 0, sup_expected = 0;
  double sup_ks = 0;
  double out_mean = 0, out_var = 0;  // D(t) - zeta - rho t
  double x0_var = 0;                 // x_0(t) - zeta_0 - rho t in a two-sided stationary window
  double gap_ks = 0, band = 0;
  bool pass_sup = false, pass_out = false, pass_x0 = false, pass_gap = false;
  bool pass() const { return pass_sup && pass_out && pass_x0 && pass_gap; }
};

BurkeReport burke_check(uint64_t seed, double rho, double t, int64_t samples, double dt = 0);

}  // namespace kpz

#include "kpz/parallel.hpp"
