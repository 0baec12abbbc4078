#include "kpz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kpz/rng.hpp"

namespace kpz {

namespace {

void leftmost_row(double zeta, const double* inc, double drift, const TimeGrid& g, double* out) {
  double b = 0;
  out[0] = zeta;
  for (int j = 1; j <= g.n_steps; ++j) {
    b += inc[j - 1];
    out[j] = zeta + b + drift * g.time(j);
  }
}

// x_n(t_j) = B_n(t_j) + max(zeta_n, max_{i<=j} (x_{n-1}(t_i) - B_n(t_i)))
void reflect_row(const double* prev, const double* inc, const double* uni, double zeta, const TimeGrid& g, bool bridge,
                 double* out) {
  const double four_dt = 4.0 * g.dt();
  double b = 0, d0 = prev[0], run = prev[0];
  out[0] = std::max(zeta, run);
  for (int j = 1; j <= g.n_steps; ++j) {
    b += inc[j - 1];
    const double d1 = prev[j] - b;
    if (bridge) {
      // max of a variance-2 bridge from d0 to d1 over one step
      const double gap = d1 - d0;
      run = std::max(run, 0.5 * (d0 + d1 + std::sqrt(gap * gap - four_dt * std::log(uni[j - 1]))));
    } else {
      run = std::max(run, d1);
    }
    out[j] = b + std::max(zeta, run);
    d0 = d1;
  }
}

void check_match(const HeightVector& ic, const BrownianPaths& paths) {
  if (ic.range.lo != paths.range().lo || ic.range.hi != paths.range().hi)
    throw std::invalid_argument("initial condition and paths cover different index ranges");
}

}  // namespace

TrajectorySet evolve_skorokhod(const HeightVector& ic, const BrownianPaths& paths, const EvolveOptions& opt) {
  check_match(ic, paths);
  const TimeGrid& g = paths.grid();
  const size_t w = size_t(g.n_steps) + 1;
  TrajectorySet tr{ic.range, g, std::vector<double>(size_t(ic.range.size()) * w)};
  leftmost_row(ic.at(ic.range.lo), paths.increments(ic.range.lo), opt.leftmost_drift.value_or(0.0), g, tr.x.data());
  for (int64_t n = ic.range.lo + 1; n <= ic.range.hi; ++n) {
    const size_t k = size_t(n - ic.range.lo);
    reflect_row(&tr.x[(k - 1) * w], paths.increments(n), paths.uniforms(n), ic.at(n), g, opt.bridge, &tr.x[k * w]);
  }
  return tr;
}

std::vector<double> evolve_final(const HeightVector& ic, const BrownianPaths& paths, const EvolveOptions& opt,
                                 const std::vector<int64_t>& targets, const std::vector<int>& time_index) {
  check_match(ic, paths);
  const TimeGrid& g = paths.grid();
  std::vector<double> a(size_t(g.n_steps) + 1), b(a.size()), out(targets.size(), NAN);
  auto collect = [&](int64_t n, const std::vector<double>& row) {
    for (size_t q = 0; q < targets.size(); ++q)
      if (targets[q] == n) out[q] = row[size_t(time_index[q])];
  };
  leftmost_row(ic.at(ic.range.lo), paths.increments(ic.range.lo), opt.leftmost_drift.value_or(0.0), g, a.data());
  collect(ic.range.lo, a);
  for (int64_t n = ic.range.lo + 1; n <= ic.range.hi; ++n) {
    reflect_row(a.data(), paths.increments(n), paths.uniforms(n), ic.at(n), g, opt.bridge, b.data());
    collect(n, b);
    std::swap(a, b);
  }
  for (size_t q = 0; q < targets.size(); ++q)
    if (std::isnan(out[q])) throw std::out_of_range("evolve_final: target index outside range");
  return out;
}

double variational_value(const BrownianPaths& paths, const HeightVector& ic, int64_t k_min, int64_t n, double t,
                         std::optional<double> leftmost_drift) {
  if (k_min > n) throw std::invalid_argument("variational_value: k_min > n");
  if (!ic.range.contains(k_min) || !ic.range.contains(n)) throw std::out_of_range("variational_value: index outside range");
  const TimeGrid& g = paths.grid();
  const int J = g.index_of(t);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> h(size_t(J) + 1), nxt(h.size());
  for (int64_t k = k_min; k <= n; ++k) {
    // last passage from (k, 0) to (i, t_j) over grid paths
    const double* inc = paths.increments(k);
    const double drift = (k == ic.range.lo && leftmost_drift) ? *leftmost_drift : 0.0;
    h[0] = 0;
    for (int j = 1; j <= J; ++j) h[size_t(j)] = h[size_t(j - 1)] + inc[j - 1] + drift * (g.time(j) - g.time(j - 1));
    for (int64_t i = k + 1; i <= n; ++i) {
      const double* di = paths.increments(i);
      nxt[0] = h[0];
      for (int j = 1; j <= J; ++j) nxt[size_t(j)] = std::max(nxt[size_t(j - 1)] + di[j - 1], h[size_t(j)]);
      std::swap(h, nxt);
    }
    best = std::max(best, h[size_t(J)] + ic.at(k));
  }
  return best;
}

TruncationResult evolve_truncated_infinite(const TruncationSetup& s, const std::vector<int64_t>& targets,
                                           const std::vector<int>& time_index, double tol) {
  if (targets.empty()) throw std::invalid_argument("evolve_truncated_infinite: no targets");
  const int64_t hi = *std::max_element(targets.begin(), targets.end());
  const int64_t lo_t = *std::min_element(targets.begin(), targets.end());
  TruncationResult res;
  if (s.flavor != Flavor::flat && s.flavor != Flavor::stat) {
    const int64_t lo = min_index(s.flavor);
    const IndexRange range{lo, hi};
    const auto ic = make_initial_condition(s.flavor, s.params, range, s.seed);
    EvolveOptions opt;
    opt.bridge = s.bridge;
    if (s.flavor == Flavor::stat_flat) opt.leftmost_drift = s.params.rho;
    res.values = evolve_final(ic, sample_paths(s.seed, s.grid, range), opt, targets, time_index);
    res.converged = true;
    return res;
  }
  std::vector<double> prev;
  int agree = 0;
  for (int64_t M = std::max<int64_t>(s.M0, -lo_t + 1); M <= s.M_max; M *= 2) {
    const IndexRange range{-M, hi};
    const auto ic = make_initial_condition(s.flavor, s.params, range, s.seed);
    EvolveOptions opt;
    opt.bridge = s.bridge;
    auto v = evolve_final(ic, sample_paths(s.seed, s.grid, range), opt, targets, time_index);
    if (!prev.empty()) {
      double diff = 0;
      for (size_t q = 0; q < v.size(); ++q) diff = std::max(diff, std::abs(v[q] - prev[q]));
      agree = diff < tol ? agree + 1 : 0;
    }
    prev = v;
    res.values = v;
    res.M_used = M;
    if (agree >= 2) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

ExitPointRecord exit_point(const BrownianPaths& paths, const HeightVector& ic, double rho, int64_t n, double t) {
  check_match(ic, paths);
  if (ic.range.lo != 0) throw std::invalid_argument("exit_point: needs a boundary line at index 0");
  if (n < 1 || n > ic.range.hi) throw std::out_of_range("exit_point: index outside range");
  const TimeGrid& g = paths.grid();
  const int J = g.index_of(t);
  const size_t w = size_t(g.n_steps) + 1;
  std::vector<double> prev(w), cur(w), zprev(w, 0.0), zcur(w);
  leftmost_row(ic.at(0), paths.increments(0), rho, g, prev.data());
  for (int64_t k = 1; k <= n; ++k) {
    const double* inc = paths.increments(k);
    const double zeta = ic.at(k);
    double b = 0, run = prev[0];
    int arg = 0;
    auto exit_of = [&](int i) { return k == 1 ? g.time(i) : zprev[size_t(i)]; };
    cur[0] = std::max(zeta, run);
    zcur[0] = 0;
    for (int j = 1; j <= J; ++j) {
      b += inc[j - 1];
      const double d = prev[size_t(j)] - b;
      if (d > run) run = d, arg = j;
      cur[size_t(j)] = b + std::max(zeta, run);
      zcur[size_t(j)] = zeta >= run ? 0.0 : exit_of(arg);
    }
    std::swap(prev, cur);
    std::swap(zprev, zcur);
  }
  return {n, t, zprev[size_t(J)]};
}

int64_t integer_part(double v) { return int64_t(std::ceil(v - 0.5)); }

int64_t min_index(Flavor f) {
  switch (f) {
    case Flavor::packed:
    case Flavor::half_flat:
    case Flavor::stat_flat: return 1;
    case Flavor::stat:
    case Flavor::half_stat: return 0;
    case Flavor::flat: return std::numeric_limits<int64_t>::min();
  }
  return 0;
}

namespace {

TimeGrid grid_through(double t, double t_end, double dt) {
  if (dt <= 0) dt = 1e-3 * t;
  const double h = t / std::ceil(t / dt - 1e-9);
  const int steps = int(std::lround(t_end / h));
  return TimeGrid(steps * h, steps);
}

std::vector<double> replica_positions(Flavor flavor, IcParams params, const TimeGrid& grid,
                                      const std::vector<int64_t>& n, const std::vector<int>& jt, uint64_t seed,
                                      bool bridge) {
  TruncationSetup s{flavor, params, seed, grid, bridge};
  if (flavor == Flavor::stat) {
    // drifted boundary particle at index 0 replaces everything to its left
    const IndexRange range{0, std::max<int64_t>(1, *std::max_element(n.begin(), n.end()))};
    const auto ic = make_initial_condition(flavor, params, range, seed);
    EvolveOptions opt;
    opt.bridge = bridge;
    opt.leftmost_drift = params.rho;
    return evolve_final(ic, sample_paths(seed, grid, range), opt, n, jt);
  }
  auto r = evolve_truncated_infinite(s, n, jt, 1e-12);
  if (!r.converged) throw std::runtime_error("truncation did not stabilise");
  return r.values;
}

}  // namespace

std::vector<std::vector<double>> sample_positions(Flavor flavor, IcParams params, double t, const std::vector<int64_t>& n,
                                                  int64_t samples, uint64_t seed, double dt, bool bridge) {
  if (n.empty()) throw std::invalid_argument("sample_positions: no indices");
  for (auto k : n)
    if (k < min_index(flavor)) throw std::invalid_argument("sample_positions: index below the flavor's first particle");
  const TimeGrid grid = grid_through(t, t, dt);
  const std::vector<int> jt(n.size(), grid.n_steps);
  std::vector<std::vector<double>> out(static_cast<size_t>(samples));
  parallel_for(samples, [&](int64_t r) {
    out[size_t(r)] = replica_positions(flavor, params, grid, n, jt, replica_seed(seed, uint64_t(r)), bridge);
  });
  return out;
}

std::vector<std::vector<ScaledSample>> rescaled_samples(const SimulationSpec& spec) {
  if (spec.r.empty()) throw std::invalid_argument("rescaled_samples: empty r list");
  std::vector<double> theta = spec.theta;
  if (theta.empty()) theta.assign(spec.r.size(), 0.0);
  if (theta.size() != spec.r.size()) throw std::invalid_argument("rescaled_samples: r and theta lists differ in length");
  const double t = spec.t, t23 = std::pow(t, 2.0 / 3.0), t13 = std::cbrt(t);
  double t_end = t;
  for (double th : theta) {
    if (t + th <= 0) throw std::invalid_argument("rescaled_samples: t + theta must be positive");
    t_end = std::max(t_end, t + th);
  }
  const TimeGrid grid = grid_through(t, t_end, spec.dt);
  std::vector<int64_t> n(spec.r.size());
  std::vector<int> jt(spec.r.size());
  for (size_t k = 0; k < n.size(); ++k) {
    n[k] = integer_part(t + 2 * spec.r[k] * t23 + theta[k]);
    if (n[k] < min_index(spec.flavor))
      throw std::invalid_argument("rescaled_samples: index underflow for r=" + std::to_string(spec.r[k]));
    jt[k] = grid.index_of(t + theta[k]);
  }
  std::vector<std::vector<ScaledSample>> out(static_cast<size_t>(spec.samples));
  parallel_for(spec.samples, [&](int64_t rep) {
    const auto x = replica_positions(spec.flavor, spec.params, grid, n, jt, replica_seed(spec.seed, uint64_t(rep)), spec.bridge);
    auto& row = out[size_t(rep)];
    row.resize(n.size());
    for (size_t k = 0; k < n.size(); ++k)
      row[k] = {spec.r[k], theta[k], (x[k] - 2 * t - 2 * theta[k] - 2 * spec.r[k] * t23) / t13};
  });
  return out;
}

namespace {

double ks_exponential(std::vector<double> v, double rate) {
  std::sort(v.begin(), v.end());
  const double n = double(v.size());
  double d = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double F = 1 - std::exp(-rate * std::max(0.0, v[i]));
    d = std::max({d, std::abs(F - i / n), std::abs((i + 1) / n - F)});
  }
  return d;
}

}  // namespace

BurkeReport burke_check(uint64_t seed, double rho, double t, int64_t samples, double dt) {
  if (!(rho > 0)) throw std::invalid_argument("burke_check: rho must be positive");
  BurkeReport rep;
  rep.rho = rho;
  rep.t = t;
  rep.samples = samples;
  rep.band = std::sqrt(std::log(2 / 0.01) / (2.0 * double(samples)));
  const TimeGrid grid = grid_through(t, t, dt);
  const double h = grid.dt();
  std::vector<double> sup(static_cast<size_t>(samples)), out(sup.size()), x0(sup.size()), gap(sup.size());
  parallel_for(samples, [&](int64_t r) {
    const uint64_t s = replica_seed(seed, uint64_t(r));
    {
      // sup over [0,t] of B(s) - rho s with the exact bridge maximum inside each step
      const auto p = sample_paths(s, grid, {0, 0});
      const double* inc = p.increments(0);
      const double* u = p.uniforms(0);
      double a = 0, m = 0;
      for (int j = 0; j < grid.n_steps; ++j) {
        const double b = a + inc[j] - rho * h;
        m = std::max(m, 0.5 * (a + b + std::sqrt((b - a) * (b - a) - 2 * h * std::log(u[j]))));
        a = b;
      }
      sup[size_t(r)] = m;
    }
    EvolveOptions opt;
    opt.bridge = true;
    opt.leftmost_drift = rho;
    {
      const IndexRange range{0, 1};
      auto ic = make_initial_condition(Flavor::stat, {rho, rho}, range, s);
      const auto x = evolve_final(ic, sample_paths(s, grid, range), opt, {1}, {grid.n_steps});
      out[size_t(r)] = x[0] - ic.at(1) - rho * t;
    }
    {
      const IndexRange range{-64, 0};
      auto ic = make_initial_condition(Flavor::stat, {rho, rho}, range, s);
      const auto x = evolve_final(ic, sample_paths(s, grid, range), opt, {0}, {grid.n_steps});
      x0[size_t(r)] = x[0] - ic.at(0) - rho * t;
    }
    {
      const IndexRange range{0, 4};
      auto ic = make_initial_condition(Flavor::stat, {rho, rho}, range, s);
      const auto x = evolve_final(ic, sample_paths(s, grid, range), opt, {3, 4}, {grid.n_steps, grid.n_steps});
      gap[size_t(r)] = x[1] - x[0];
    }
  });
  auto mean = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    return m / double(v.size());
  };
  auto var = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s2 = 0;
    for (double x : v) s2 += (x - m) * (x - m);
    return s2 / double(v.size() - 1);
  };
  rep.sup_mean = mean(sup);
  rep.sup_expected = 1 / (2 * rho);
  rep.sup_ks = ks_exponential(sup, 2 * rho);
  rep.out_mean = mean(out);
  rep.out_var = var(out);
  rep.x0_var = var(x0);
  rep.gap_ks = ks_exponential(gap, rho);
  rep.pass_sup = std::abs(rep.sup_mean / rep.sup_expected - 1) <= 0.05;
  rep.pass_out = std::abs(rep.out_var / t - 1) <= 0.05 && std::abs(rep.out_mean) <= 4 * std::sqrt(t / double(samples));
  rep.pass_x0 = std::abs(rep.x0_var / t - 1) <= 0.05;
  rep.pass_gap = rep.gap_ks <= rep.band;
  return rep;
}

}  // namespace kpz
