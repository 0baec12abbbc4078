#include "kpz/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
// boost 1.74 pchip calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "kpz/airylim.hpp"
#include "kpz/dynamics.hpp"
#include "kpz/finitet.hpp"
#include "kpz/fredholm.hpp"
#include "kpz/rng.hpp"

namespace kpz {

using nlohmann::json;

namespace {

template <class T>
void get_if(const json& j, const char* key, T& v) {
  if (j.contains(key) && !j[key].is_null()) v = j[key].get<T>();
}

// scalar or list
template <class T>
void get_list(const json& j, const char* key, std::vector<T>& v) {
  if (!j.contains(key) || j[key].is_null()) return;
  if (j[key].is_array())
    v = j[key].get<std::vector<T>>();
  else
    v = {j[key].get<T>()};
}

double normal_cdf(double x, double var) { return 0.5 * std::erfc(-x / std::sqrt(2 * var)); }

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  static const std::vector<std::string> keys{"kind", "flavor", "process", "t",     "r",     "theta",  "s",
                                             "a",    "n_indices", "samples", "seed", "dt", "order", "lcut",
                                             "delta", "lambda", "rho", "out"};
  for (auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw std::invalid_argument("unknown config key: " + k);
  if (!j.contains("seed")) throw std::invalid_argument("config: seed is mandatory");
  ExperimentConfig c;
  get_if(j, "kind", c.kind);
  get_if(j, "flavor", c.flavor);
  get_if(j, "process", c.process);
  get_if(j, "t", c.t);
  get_list(j, "r", c.r);
  get_list(j, "theta", c.theta);
  get_list(j, "s", c.s);
  get_list(j, "a", c.a);
  get_list(j, "n_indices", c.n_indices);
  get_if(j, "samples", c.samples);
  get_if(j, "seed", c.seed);
  get_if(j, "dt", c.dt);
  get_if(j, "order", c.order);
  get_if(j, "lcut", c.lcut);
  get_if(j, "delta", c.delta);
  get_if(j, "lambda", c.lambda);
  get_if(j, "rho", c.rho);
  get_if(j, "out", c.out);
  validate(c);
  return c;
}

json to_json(const ExperimentConfig& c) {
  return json{{"kind", c.kind},   {"flavor", c.flavor},   {"process", c.process}, {"t", c.t},
              {"r", c.r},         {"theta", c.theta},     {"s", c.s},             {"a", c.a},
              {"n_indices", c.n_indices}, {"samples", c.samples}, {"seed", c.seed}, {"dt", c.dt},
              {"order", c.order}, {"lcut", c.lcut},       {"delta", c.delta},     {"lambda", c.lambda},
              {"rho", c.rho},     {"out", c.out}};
}

void validate(const ExperimentConfig& c) {
  static const std::vector<std::string> kinds{"mc-vs-finite-t", "mc-vs-limit", "finite-t-vs-limit", "property-suite"};
  if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end())
    throw std::invalid_argument("config: unknown kind '" + c.kind + "'");
  if (!(c.t > 0)) throw std::invalid_argument("config: t must be positive");
  if (c.samples < 10) throw std::invalid_argument("config: need at least 10 samples");
  if (c.dt < 0 || c.lcut < 0) throw std::invalid_argument("config: dt and lcut must be non-negative");
  if (c.order < 4) throw std::invalid_argument("config: order must be at least 4");
  if (!(c.lambda > 0) || c.rho < 0) throw std::invalid_argument("config: need lambda > 0 and rho >= 0");
  if (c.r.empty()) throw std::invalid_argument("config: r list is empty");
  parse_flavor(c.flavor);
}

EcdfTable::EcdfTable(std::vector<double> samples) : v_(std::move(samples)) {
  if (v_.empty()) throw std::invalid_argument("ecdf: no samples");
  std::sort(v_.begin(), v_.end());
}

double EcdfTable::operator()(double x) const {
  return double(std::upper_bound(v_.begin(), v_.end(), x) - v_.begin()) / double(v_.size());
}

double EcdfTable::left(double x) const {
  return double(std::lower_bound(v_.begin(), v_.end(), x) - v_.begin()) / double(v_.size());
}

EcdfTable ecdf(std::vector<double> samples) { return EcdfTable(std::move(samples)); }

double ks_distance(const EcdfTable& e, const std::function<double(double)>& cdf, const std::vector<double>& grid) {
  double d = 0;
  const auto& v = e.sorted();
  for (size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    const double F = cdf(v[i]);
    d = std::max({d, std::abs(e(v[i]) - F), std::abs(e.left(v[i]) - F)});
  }
  for (double x : grid) {
    const double F = cdf(x);
    d = std::max({d, std::abs(e(x) - F), std::abs(e.left(x) - F)});
  }
  return d;
}

double ks_two_sample(const EcdfTable& a, const EcdfTable& b) {
  double d = 0;
  for (const auto* s : {&a.sorted(), &b.sorted()})
    for (double x : *s) d = std::max(d, std::abs(a(x) - b(x)));
  return d;
}

double dkw_band(size_t n, double alpha) { return std::sqrt(std::log(2 / alpha) / (2.0 * double(n))); }

TabulatedCdf::TabulatedCdf(std::vector<double> grid, std::vector<double> values) {
  if (grid.size() < 4 || grid.size() != values.size()) throw std::invalid_argument("TabulatedCdf: need >= 4 points");
  lo_ = grid.front();
  hi_ = grid.back();
  ylo_ = values.front();
  yhi_ = values.back();
  auto p = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(grid), std::move(values));
  interp_ = std::make_shared<const std::function<double(double)>>([p](double x) { return (*p)(x); });
}

double TabulatedCdf::operator()(double x) const {
  if (x <= lo_) return ylo_;
  if (x >= hi_) return yhi_;
  return std::clamp((*interp_)(x), 0.0, 1.0);
}

TabulatedCdf tabulate(const std::function<double(double)>& cdf, double lo, double hi, double step) {
  const int m = std::max(4, int(std::ceil((hi - lo) / step)) + 1);
  std::vector<double> x(static_cast<size_t>(m)), y(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    x[size_t(i)] = lo + (hi - lo) * i / (m - 1);
    y[size_t(i)] = cdf(x[size_t(i)]);
  }
  // clipped determinants can wobble at the 1e-12 level; keep the table monotone
  for (int i = 1; i < m; ++i) y[size_t(i)] = std::max(y[size_t(i)], y[size_t(i - 1)]);
  return TabulatedCdf(std::move(x), std::move(y));
}

std::string meta_hash(const json& meta) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : meta.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << h;
  return o.str();
}

json to_json(const ComparisonReport& r) {
  return json{{"kind", r.kind}, {"statistic", r.statistic}, {"threshold", r.threshold},
              {"pass", r.pass}, {"details", r.details},     {"meta", r.meta}};
}

std::string render_report(const ComparisonReport& r, const std::string& timestamp) {
  json j = to_json(r);
  j["timestamp"] = timestamp;
  return j.dump(2) + "\n";
}

void write_report(const ComparisonReport& r, const std::string& path) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << render_report(r, buf);
}

void write_sample_csv(const std::string& path, const std::vector<SampleRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "replica,r,theta,value\n";
  for (auto& row : rows) f << row.replica << ',' << fmt(row.r) << ',' << fmt(row.theta) << ',' << fmt(row.value) << '\n';
}

void write_cdf_csv(const std::string& path, const std::vector<std::string>& coords,
                   const std::vector<std::vector<double>>& coord_values, const std::vector<double>& values, int order,
                   const std::string& hash) {
  if (coord_values.size() != values.size()) throw std::invalid_argument("write_cdf_csv: row count mismatch");
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  for (auto& c : coords) f << c << ',';
  f << "value,order,meta_hash\n";
  for (size_t i = 0; i < values.size(); ++i) {
    if (coord_values[i].size() != coords.size()) throw std::invalid_argument("write_cdf_csv: coordinate count mismatch");
    for (double v : coord_values[i]) f << fmt(v) << ',';
    f << fmt(values[i]) << ',' << order << ',' << hash << '\n';
  }
}

namespace {

FiniteTimeSpec finite_spec(const ExperimentConfig& c) {
  FiniteTimeSpec s;
  s.flavor = parse_flavor(c.flavor);
  s.t = c.t;
  s.lambda = c.lambda;
  s.rho = c.rho;
  s.order = c.order;
  if (c.lcut > 0) s.x_cut = c.lcut;
  return s;
}

std::vector<std::vector<double>> scaled_columns(const ExperimentConfig& c, const std::vector<double>& r,
                                                const std::vector<double>& theta) {
  SimulationSpec sim;
  sim.flavor = parse_flavor(c.flavor);
  sim.params = {c.lambda, c.rho};
  sim.t = c.t;
  sim.r = r;
  sim.theta = theta;
  sim.samples = c.samples;
  sim.seed = c.seed;
  sim.dt = c.dt;
  const auto rows = rescaled_samples(sim);
  std::vector<std::vector<double>> cols(r.size(), std::vector<double>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t k = 0; k < r.size(); ++k) cols[k][i] = rows[i][k].value;
  return cols;
}

// one-point limit law of the scaled observable for each flavor
std::function<double(double)> limit_cdf_for(const ExperimentConfig& c, double r) {
  LimitOptions opt;
  opt.order = c.order;
  if (c.lcut > 0) opt.x_cut = c.lcut;
  if (!c.process.empty()) {
    LimitSpec spec{parse_process(c.process), c.delta};
    if (spec.process == LimitProcess::airy_stat) return [=](double s) { return cdf_airy_stat({r}, {s}, opt); };
    return [=](double s) { return cdf_limit(spec, {r}, {s}, opt); };
  }
  switch (parse_flavor(c.flavor)) {
    case Flavor::packed:
      return [=](double s) { return cdf_limit({LimitProcess::airy2}, {r}, {s}, opt); };
    case Flavor::flat:
      return [=](double s) { return f_goe_2s(s / std::cbrt(2.0), opt); };
    case Flavor::stat:
      if (c.lambda != c.rho) break;
      return [=](double s) { return cdf_airy_stat({r}, {s}, opt); };
    default:
      break;
  }
  throw std::invalid_argument("mc-vs-limit: no default limit for flavor " + c.flavor + "; set process");
}

ComparisonReport mc_vs_cdf(const ExperimentConfig& c, bool finite) {
  ComparisonReport rep;
  rep.kind = c.kind;
  const auto cols = scaled_columns(c, c.r, {});
  const double band = dkw_band(size_t(c.samples));
  const FiniteTimeSpec fs = finite_spec(c);
  double worst = 0;
  json per = json::array();
  for (size_t k = 0; k < c.r.size(); ++k) {
    const double r = c.r[k];
    const int64_t n = integer_part(c.t + 2 * r * std::pow(c.t, 2.0 / 3));
    std::function<double(double)> F;
    if (finite)
      F = [&, r, n](double s) { return finite_t_cdf(fs, {n}, {scaled_position(c.t, r, s)}); };
    else
      F = limit_cdf_for(c, r);
    const auto [mn, mx] = std::minmax_element(cols[k].begin(), cols[k].end());
    const double lo = std::max(-14.0, *mn - 0.25), hi = std::min(12.0, *mx + 0.25);
    const auto tab = tabulate(F, lo, hi, 0.05);
    const EcdfTable e(cols[k]);
    const double ks = ks_distance(e, [&](double s) { return tab(s); });
    worst = std::max(worst, ks);
    per.push_back({{"r", r}, {"n", n}, {"ks", ks}, {"grid", {lo, hi, 0.05}}});
  }
  rep.statistic = worst;
  rep.threshold = band;
  rep.pass = worst <= band;
  rep.details = {{"per_r", per}, {"band", band}};
  return rep;
}

ComparisonReport finite_vs_limit(const ExperimentConfig& c) {
  ComparisonReport rep;
  rep.kind = c.kind;
  const Flavor f = parse_flavor(c.flavor);
  if (f != Flavor::packed && f != Flavor::flat)
    throw std::invalid_argument("finite-t-vs-limit supports packed and flat");
  const std::vector<double> s = c.s.empty() ? std::vector<double>{-2, 0, 2} : c.s;
  const double r = c.r.front();
  ExperimentConfig lc = c;
  lc.process.clear();
  const auto lim = limit_cdf_for(lc, r);
  std::vector<double> ts{c.t / 16, c.t / 4, c.t}, sup;
  json rows = json::array();
  for (double t : ts) {
    ExperimentConfig tc = c;
    tc.t = t;
    const FiniteTimeSpec fs = finite_spec(tc);
    const int64_t n = integer_part(t + 2 * r * std::pow(t, 2.0 / 3));
    double d = 0;
    for (double si : s) {
      const double v = finite_t_cdf(fs, {n}, {scaled_position(t, r, si)}), l = lim(si);
      d = std::max(d, std::abs(v - l));
      rows.push_back({{"t", t}, {"n", n}, {"s", si}, {"finite", v}, {"limit", l}});
    }
    sup.push_back(d);
  }
  bool mono = true;
  for (size_t i = 1; i < sup.size(); ++i) mono = mono && sup[i] <= sup[i - 1];
  rep.statistic = sup.back();
  rep.threshold = sup.front();
  rep.pass = mono;
  rep.details = {{"t", ts}, {"sup_distance", sup}, {"rows", rows}};
  return rep;
}

ComparisonReport property_suite(const ExperimentConfig& c) {
  ComparisonReport rep;
  rep.kind = c.kind;
  const std::string& p = c.process;
  if (p == "burke") {
    const auto b = burke_check(c.seed, c.rho, c.t, c.samples, c.dt);
    rep.statistic = b.gap_ks;
    rep.threshold = b.band;
    rep.pass = b.pass();
    rep.details = {{"sup_mean", b.sup_mean}, {"sup_expected", b.sup_expected}, {"out_mean", b.out_mean},
                   {"out_var", b.out_var},   {"x0_var", b.x0_var},            {"gap_ks", b.gap_ks},
                   {"pass_sup", b.pass_sup}, {"pass_out", b.pass_out},        {"pass_x0", b.pass_x0},
                   {"pass_gap", b.pass_gap}};
  } else if (p == "lln") {
    const int64_t n = c.n_indices.empty() ? 400 : c.n_indices.front();
    const auto l = lln_check(c.seed, n, c.samples, c.dt);
    rep.statistic = l.mean;
    rep.threshold = 0.05 * l.target;
    rep.pass = l.pass;
    rep.details = {{"n", n}, {"mean", l.mean}};
  } else if (p == "attractiveness") {
    const auto a = attractiveness_check(c.seed, c.samples, c.t, c.n_indices.empty() ? 40 : c.n_indices.front(), c.dt);
    rep.statistic = double(a.violations);
    rep.pass = a.violations == 0;
    rep.details = {{"pairs", a.pairs}, {"violations", a.violations}, {"worst_ratio", a.worst_ratio}};
  } else if (p == "gaussian-increments") {
    const auto g = gaussian_increments(c.seed, c.t, c.r, c.samples, c.dt);
    rep.statistic = *std::max_element(g.ks.begin(), g.ks.end());
    rep.threshold = 2 * g.band;
    rep.pass = g.pass;
    rep.details = {{"r", g.r}, {"var", g.var}, {"ks", g.ks}};
  } else if (p == "slow-decorrelation") {
    const double th = c.theta.empty() ? std::sqrt(c.t) : c.theta.front();
    const auto d = slow_decorrelation(c.seed, c.t, c.r.front(), th, c.samples, c.dt);
    rep.statistic = d.ks;
    rep.threshold = 2 * d.band;
    rep.pass = d.pass;
    rep.details = {{"theta", th}};
  } else if (p == "density") {
    const auto d = density_check(c.seed, c.t, c.samples, c.dt);
    rep.statistic = d.worst_z;
    rep.threshold = 4;
    rep.pass = d.pass;
    rep.details = {{"mass", d.mass}, {"cells", d.cells}, {"outside", d.outside}};
  } else {
    throw std::invalid_argument("property-suite: unknown property '" + p + "'");
  }
  return rep;
}

}  // namespace

ComparisonReport run_experiment(const ExperimentConfig& c) {
  validate(c);
  ComparisonReport rep;
  if (c.kind == "mc-vs-finite-t")
    rep = mc_vs_cdf(c, true);
  else if (c.kind == "mc-vs-limit")
    rep = mc_vs_cdf(c, false);
  else if (c.kind == "finite-t-vs-limit")
    rep = finite_vs_limit(c);
  else
    rep = property_suite(c);
  json meta = to_json(c);
  meta.erase("out");
  rep.meta = meta;
  rep.meta["meta_hash"] = meta_hash(meta);
  if (!c.out.empty()) write_report(rep, c.out);
  return rep;
}

AttractivenessReport attractiveness_check(uint64_t seed, int64_t pairs, double t, int64_t n_max, double dt) {
  const std::vector<Flavor> fl{Flavor::packed, Flavor::flat,      Flavor::stat,
                               Flavor::half_flat, Flavor::half_stat, Flavor::stat_flat};
  const IndexRange range{1, n_max};
  const TimeGrid grid = TimeGrid::with_dt(t, dt > 0 ? dt : 1e-3 * t);
  AttractivenessReport rep;
  for (size_t i = 0; i < fl.size(); ++i)
    for (size_t j = i; j < fl.size(); ++j)
      for (int64_t k = 0; k < pairs; ++k) {
        const uint64_t s = replica_seed(seed, uint64_t(k) + 1000 * (i * fl.size() + j));
        const auto a = make_initial_condition(fl[i], {1, 0.5}, range, s);
        const auto b = make_initial_condition(fl[j], {0.7, 0.4}, range, s + 1);
        const auto paths = sample_paths(s, grid, range);
        EvolveOptions opt;
        opt.bridge = true;
        const auto xa = evolve_skorokhod(a, paths, opt), xb = evolve_skorokhod(b, paths, opt);
        double d0 = 0, d = 0;
        for (size_t q = 0; q < a.zeta.size(); ++q) d0 = std::max(d0, std::abs(a.zeta[q] - b.zeta[q]));
        for (size_t q = 0; q < xa.x.size(); ++q) d = std::max(d, std::abs(xa.x[q] - xb.x[q]));
        ++rep.pairs;
        // rounding slack only
        if (d > d0 * (1 + 1e-12) + 1e-12) ++rep.violations;
        if (d0 > 0) rep.worst_ratio = std::max(rep.worst_ratio, d / d0);
      }
  return rep;
}

LlnReport lln_check(uint64_t seed, int64_t n, int64_t samples, double dt) {
  const auto x = sample_positions(Flavor::packed, {}, 1.0, {n}, samples, seed, dt);
  LlnReport rep;
  for (auto& v : x) rep.mean += v[0] / std::sqrt(double(n));
  rep.mean /= double(samples);
  rep.pass = std::abs(rep.mean - rep.target) <= 0.05 * rep.target;
  return rep;
}

IncrementReport gaussian_increments(uint64_t seed, double t, const std::vector<double>& r, int64_t samples, double dt) {
  ExperimentConfig c;
  c.flavor = "stat";
  c.t = t;
  c.lambda = c.rho = 1;
  c.samples = samples;
  c.seed = seed;
  c.dt = dt;
  std::vector<double> rr{0.0};
  for (double v : r)
    if (v != 0) rr.push_back(v);
  const auto cols = scaled_columns(c, rr, {});
  IncrementReport rep;
  rep.band = dkw_band(size_t(samples));
  rep.pass = true;
  for (size_t k = 1; k < rr.size(); ++k) {
    std::vector<double> inc(cols[k].size());
    double m = 0, q = 0;
    for (size_t i = 0; i < inc.size(); ++i) {
      inc[i] = cols[k][i] - cols[0][i];
      m += inc[i];
      q += inc[i] * inc[i];
    }
    const double nn = double(inc.size());
    const double var = q / nn - (m / nn) * (m / nn);
    const double target = 2 * rr[k];
    const double ks = ks_distance(EcdfTable(inc), [&](double x) { return normal_cdf(x, target); });
    rep.r.push_back(rr[k]);
    rep.var.push_back(var);
    rep.ks.push_back(ks);
    rep.pass = rep.pass && std::abs(var - target) <= 0.1 * target && ks <= 2 * rep.band;
  }
  return rep;
}

DecorrelationReport slow_decorrelation(uint64_t seed, double t, double r, double theta, int64_t samples, double dt) {
  ExperimentConfig c;
  c.flavor = "packed";
  c.t = t;
  c.samples = samples;
  c.seed = seed;
  c.dt = dt;
  const auto cols = scaled_columns(c, {r, r}, {0.0, theta});
  DecorrelationReport rep;
  rep.ks = ks_two_sample(EcdfTable(cols[0]), EcdfTable(cols[1]));
  rep.band = dkw_band(size_t(samples));
  rep.pass = rep.ks <= 2 * rep.band;
  return rep;
}

namespace {

// mass of the N = 2 packed density over [a1,b1] x [a2,b2] intersected with xi1 <= xi2
double cell_mass(double t, double a1, double b1, double a2, double b2, int order) {
  std::vector<double> cuts{a1, b1};
  for (double c : {a2, b2})
    if (c > a1 && c < b1) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double m = 0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const auto q1 = gauss_legendre(order, cuts[k], cuts[k + 1]);
    for (size_t i = 0; i < q1.size(); ++i) {
      const double x1 = q1.nodes[i], lo = std::max(a2, x1);
      if (lo >= b2) continue;
      const auto q2 = gauss_legendre(order, lo, b2);
      double inner = 0;
      for (size_t j = 0; j < q2.size(); ++j)
        inner += q2.weights[j] * transition_density({0, 0}, {x1, q2.nodes[j]}, t, {0, 0});
      m += q1.weights[i] * inner;
    }
  }
  return m;
}

}  // namespace

DensityReport density_check(uint64_t seed, double t, int64_t samples, double dt) {
  DensityReport rep;
  const double st = std::sqrt(t);
  // total mass over a box holding all but ~1e-12 of the law, split into unit panels
  for (int i = -8; i < 8; ++i)
    for (int j = -6; j < 10; ++j) rep.mass += cell_mass(t, i * st, (i + 1) * st, j * st, (j + 1) * st, 10);
  const auto x = sample_positions(Flavor::packed, {}, t, {1, 2}, samples, seed, dt > 0 ? dt : 1e-4 * t);
  const double lo1 = -2.5 * st, lo2 = -1.5 * st, w = 0.5 * st;
  std::vector<int64_t> count(100, 0);
  for (auto& v : x) {
    const int i = int(std::floor((v[0] - lo1) / w)), j = int(std::floor((v[1] - lo2) / w));
    if (i >= 0 && i < 10 && j >= 0 && j < 10) ++count[size_t(10 * i + j)];
  }
  rep.pass = std::abs(rep.mass - 1) <= 1e-4;
  const double N = double(samples);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double p = cell_mass(t, lo1 + i * w, lo1 + (i + 1) * w, lo2 + j * w, lo2 + (j + 1) * w, 10);
      const double mu = N * p, sd = std::sqrt(N * p * (1 - p));
      const double dev = std::abs(double(count[size_t(10 * i + j)]) - mu);
      ++rep.cells;
      if (dev > 4 * sd) {
        ++rep.outside;
        rep.pass = false;
      }
      if (sd > 0) rep.worst_z = std::max(rep.worst_z, dev / sd);
    }
  return rep;
}

}  // namespace kpz
