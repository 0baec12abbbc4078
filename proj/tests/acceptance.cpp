// Acceptance suite: one PASS/FAIL line per criterion.  With no arguments every criterion runs;
// otherwise only the listed numbers.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kpz/airylim.hpp"
#include "kpz/dynamics.hpp"
#include "kpz/finitet.hpp"
#include "kpz/fredholm.hpp"
#include "kpz/harness.hpp"

using namespace kpz;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (ok ? "" : "[x] ") << what << "; ";
  }
};

std::string num(double v, int prec = 4) {
  std::ostringstream o;
  o.precision(prec);
  o << v;
  return o.str();
}

void c1(Outcome& o) {
  for (std::string f : {"packed", "half-flat", "stat"}) {
    ExperimentConfig c;
    c.kind = "mc-vs-finite-t";
    c.flavor = f;
    c.t = 25;
    c.r = {0};
    c.samples = 10000;
    c.seed = 101;
    c.lambda = 1;
    c.rho = 0.5;
    const auto rep = run_experiment(c);
    o.check(rep.pass, f + " KS " + num(rep.statistic) + " band " + num(rep.threshold));
  }
}

void c2(Outcome& o) {
  const auto d = density_check(202, 1.0, 100000, 1e-4);
  o.check(std::abs(d.mass - 1) <= 1e-4, "mass " + num(d.mass, 10));
  o.check(d.outside == 0, std::to_string(d.outside) + "/" + std::to_string(d.cells) + " cells outside 4 sigma, worst z " +
                              num(d.worst_z, 3));
}

void c3(Outcome& o) {
  const auto l = lln_check(303, 400, 2000);
  o.check(l.pass, "mean x_400(1)/20 = " + num(l.mean, 5));
}

void c4(Outcome& o) {
  const auto b = burke_check(404, 1.0, 10.0, 10000);
  o.check(b.pass_sup, "E sup(B - s) " + num(b.sup_mean) + " vs " + num(b.sup_expected));
  o.check(b.pass_gap, "gap KS " + num(b.gap_ks) + " band " + num(b.band));
  o.check(b.pass_x0, "Var x0 " + num(b.x0_var) + " vs 10");
  o.check(b.pass_out, "output mean " + num(b.out_mean) + " var " + num(b.out_var));
}

void c5(Outcome& o) {
  const auto a = attractiveness_check(505, 100, 2.0, 40);
  o.check(a.violations == 0, std::to_string(a.violations) + " violations in " + std::to_string(a.pairs) +
                                 " pairs, worst ratio " + num(a.worst_ratio, 6));
}

void c6(Outcome& o) {
  double d_bm = 0, d_minus = 0, d_plus = 0, d_rep = 0;
  for (double s : {-1.0, 0.0, 1.0}) {
    const double g = f_goe(s);
    d_bm = std::max(d_bm, std::abs(cdf_limit({LimitProcess::airy2tobm}, {0}, {s}) - g * g));
    // same raw level y = s on both sides; each process's own shift is r^2 at r < 0
    d_minus = std::max(d_minus, std::abs(cdf_limit({LimitProcess::airy2to1}, {-3}, {s - 9}) -
                                         cdf_limit({LimitProcess::airy2}, {-3}, {s - 9})));
    d_plus = std::max(d_plus, std::abs(cdf_limit({LimitProcess::airy2to1}, {3}, {s}) - f_goe_2s(s / std::cbrt(2.0))));
    d_rep = std::max(d_rep, std::abs(cdf_limit({LimitProcess::airy2}, {0.7}, {s}) -
                                     cdf_limit({LimitProcess::airy2prime}, {0.7}, {s + 0.49})));
  }
  d_rep = std::max(d_rep, std::abs(cdf_limit({LimitProcess::airy2}, {-0.5, 0.5}, {0.2, -0.3}) -
                                   cdf_limit({LimitProcess::airy2prime}, {-0.5, 0.5}, {0.45, -0.05})));
  o.check(d_bm <= 1e-5, "airy2tobm(0) vs F_GOE^2 " + num(d_bm, 3));
  o.check(d_minus <= 1e-3, "airy2to1(-3) vs airy2 " + num(d_minus, 3));
  o.check(d_plus <= 1e-3, "airy2to1(+3) vs rescaled airy1 " + num(d_plus, 3));
  o.check(d_rep <= 1e-6, "airy2 representations " + num(d_rep, 3));
}

void c7(Outcome& o) {
  for (double s : {-1.0, 0.0, 1.0}) {
    const double st = baik_rains(s), bm = cdf_limit({LimitProcess::airy2tobm}, {0}, {s});
    std::vector<double> small, large;
    for (double d : {0.5, 0.25, 0.125}) small.push_back(std::abs(cdf_limit({LimitProcess::finite_step, d}, {0}, {s}) - st));
    for (double d : {4.0, 8.0, 16.0}) large.push_back(std::abs(cdf_limit({LimitProcess::finite_step, d}, {0}, {s}) - bm));
    const bool ok_s = small[1] < small[0] && small[2] < small[1];
    const bool ok_l = large[1] < large[0] && large[2] < large[1];
    o.check(ok_s, "s=" + num(s) + " to stat " + num(small[0], 3) + " " + num(small[1], 3) + " " + num(small[2], 3));
    o.check(ok_l, "s=" + num(s) + " to 2toBM " + num(large[0], 3) + " " + num(large[1], 3) + " " + num(large[2], 3));
  }
}

void c8(Outcome& o) {
  // E X = int_0^inf (1 - F) - int_-inf^0 F
  const auto neg = gauss_legendre(120, -12, 0), pos = gauss_legendre(120, 0, 9);
  double m = 0;
  for (size_t i = 0; i < neg.size(); ++i) m -= neg.weights[i] * baik_rains(neg.nodes[i]);
  for (size_t i = 0; i < pos.size(); ++i) m += pos.weights[i] * (1 - baik_rains(pos.nodes[i]));
  o.check(std::abs(m) <= 0.02, "mean " + num(m, 3));
}

void c9(Outcome& o) {
  std::vector<double> dist;
  for (double t : {1e2, 1e3, 1e4}) {
    double d = 0;
    for (double r : {-0.5, 0.0, 0.5})
      for (double s : {-1.0, 0.0, 1.0}) {
        const auto ab = alpha_beta(t, r, s);
        d = std::max({d, std::abs(ab.alpha - alpha_limit(r, s)), std::abs(ab.beta - beta_limit(r, s))});
      }
    dist.push_back(d);
  }
  o.check(dist[1] <= dist[0] && dist[2] <= dist[1],
          "alpha/beta distance " + num(dist[0], 3) + " " + num(dist[1], 3) + " " + num(dist[2], 3));
  ExperimentConfig c;
  c.kind = "finite-t-vs-limit";
  c.flavor = "packed";
  c.t = 400;
  c.r = {0};
  c.s = {-2, 0, 2};
  const auto rep = run_experiment(c);
  const auto sup = rep.details["sup_distance"].get<std::vector<double>>();
  o.check(rep.pass, "F_GUE distance at t=25,100,400: " + num(sup[0], 3) + " " + num(sup[1], 3) + " " + num(sup[2], 3));
}

void c10(Outcome& o) {
  const auto g = gaussian_increments(1010, 100, {0.5, 1.0}, 4000);
  for (size_t k = 0; k < g.r.size(); ++k) {
    const double target = 2 * g.r[k];
    o.check(std::abs(g.var[k] - target) <= 0.1 * target, "r=" + num(g.r[k]) + " var " + num(g.var[k]));
    o.check(g.ks[k] <= 2 * g.band, "r=" + num(g.r[k]) + " KS " + num(g.ks[k]) + " vs " + num(2 * g.band));
  }
}

void c11(Outcome& o) {
  double worst = 0;
  LimitOptions lo, hi;
  hi.order = 2 * lo.order;
  struct Case {
    LimitSpec p;
    std::vector<double> r, s;
  };
  const std::vector<Case> cases{
      {{LimitProcess::airy2}, {0}, {-1}},           {{LimitProcess::airy2}, {-0.5, 0.5}, {0, 0.5}},
      {{LimitProcess::airy2prime}, {0}, {-0.5}},    {{LimitProcess::airy1}, {0}, {-0.5}},
      {{LimitProcess::airy1}, {0, 0.4}, {0, 0}},    {{LimitProcess::airy2to1}, {-1, 1}, {0, 0}},
      {{LimitProcess::airy2tobm}, {0.5}, {0}},      {{LimitProcess::airybmto1}, {-0.5}, {0}},
      {{LimitProcess::finite_step, 1.0}, {0}, {0}}, {{LimitProcess::airy_stat}, {0}, {0}},
  };
  for (auto& c : cases) worst = std::max(worst, std::abs(cdf_limit(c.p, c.r, c.s, lo) - cdf_limit(c.p, c.r, c.s, hi)));
  o.check(worst <= 1e-6, "limit order doubling " + num(worst, 3));

  worst = 0;
  const double t = 25;
  const std::vector<Flavor> fl{Flavor::packed, Flavor::flat,      Flavor::stat,
                               Flavor::half_flat, Flavor::half_stat, Flavor::stat_flat};
  for (Flavor f : fl) {
    FiniteTimeSpec a;
    a.flavor = f;
    a.t = t;
    FiniteTimeSpec b = a;
    b.order = 2 * a.order;
    const std::vector<int64_t> n{25, 30};
    const std::vector<double> x{scaled_position(t, 0, -0.5), scaled_position(t, 0.2, 0.3)};
    worst = std::max(worst, std::abs(finite_t_det(a, n, x) - finite_t_det(b, n, x)));
  }
  o.check(worst <= 1e-6, "finite-t order doubling " + num(worst, 3));

  double rich = 0;
  {
    LimitOptions h1, h2;
    h2.h = h1.h / 2;
    for (double s : {-1.0, 0.0, 1.0}) {
      rich = std::max(rich, std::abs(baik_rains(s, h1) - baik_rains(s, h2)));
      rich = std::max(rich, std::abs(cdf_limit({LimitProcess::finite_step, 0.5}, {0}, {s}, h1) -
                                     cdf_limit({LimitProcess::finite_step, 0.5}, {0}, {s}, h2)));
    }
    FiniteTimeSpec a;
    a.flavor = Flavor::stat;
    a.t = t;
    FiniteTimeSpec b = a;
    b.h = a.h / 2;
    for (double s : {-1.0, 0.0, 1.0}) {
      const double x = scaled_position(t, 0, s);
      rich = std::max(rich, std::abs(finite_t_cdf(a, {25}, {x}) - finite_t_cdf(b, {25}, {x})));
    }
  }
  o.check(rich <= 1e-4, "derivative step halving " + num(rich, 3));

  ExperimentConfig c;
  c.kind = "mc-vs-finite-t";
  c.flavor = "packed";
  c.t = 4;
  c.samples = 500;
  c.seed = 1111;
  const auto r1 = run_experiment(c), r2 = run_experiment(c);
  const bool same = render_report(r1, "T") == render_report(r2, "T");
  o.check(same, std::string("report bytes ") + (same ? "identical" : "differ"));
}

void c12(Outcome& o) {
  const auto d = slow_decorrelation(1212, 100, 0, 10, 5000);
  o.check(d.pass, "two-sample KS " + num(d.ks) + " vs " + num(2 * d.band));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Outcome&)>> all{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= int(all.size()); ++i) which.push_back(i);
  bool ok = true;
  for (int k : which) {
    if (k < 1 || k > int(all.size())) {
      std::fprintf(stderr, "no criterion %d\n", k);
      return 2;
    }
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      all[size_t(k - 1)](o);
    } catch (const std::exception& e) {
      o.check(false, std::string("error: ") + e.what());
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s (%.0fs) %s\n", k, o.pass ? "PASS" : "FAIL", sec, o.detail.str().c_str());
    std::fflush(stdout);
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
