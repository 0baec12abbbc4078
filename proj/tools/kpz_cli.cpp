#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>

#include "kpz/airylim.hpp"
#include "kpz/dynamics.hpp"
#include "kpz/finitet.hpp"
#include "kpz/harness.hpp"

using namespace kpz;
using nlohmann::json;

namespace {

// usage errors exit 2, numerical or io failures exit 1
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void need_same_length(size_t a, size_t b, const char* what) {
  if (a != b) throw UsageError(std::string(what) + ": lists differ in length");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian TASEP / KPZ fluctuation toolkit"};
  app.require_subcommand(1);

  std::string flavor = "packed", process = "airy2", out, kind, config;
  double t = 25, lambda = 1, rho = 0.5, delta = 0, lcut = 0, dt = 0;
  std::vector<double> r, theta, s, a;
  std::vector<int64_t> n;
  int64_t samples = 1000;
  uint64_t seed = 0;
  int order = 60;

  auto* sim = app.add_subcommand("simulate", "sample rescaled positions by Monte Carlo");
  sim->add_option("--flavor", flavor)->required();
  sim->add_option("--t", t)->required();
  sim->add_option("--r", r)->delimiter(',')->required();
  sim->add_option("--theta", theta)->delimiter(',');
  sim->add_option("--samples", samples)->required();
  sim->add_option("--seed", seed)->required();
  sim->add_option("--dt", dt);
  sim->add_option("--lambda", lambda);
  sim->add_option("--rho", rho);
  sim->add_option("--out", out)->required();

  auto* fin = app.add_subcommand("finite-cdf", "finite-time joint distribution function");
  fin->add_option("--flavor", flavor)->required();
  fin->add_option("--t", t)->required();
  fin->add_option("--n", n)->delimiter(',')->required();
  fin->add_option("--a", a)->delimiter(',')->required();
  fin->add_option("--lambda", lambda);
  fin->add_option("--rho", rho);
  fin->add_option("--order", order);
  fin->add_option("--out", out)->required();

  auto* lim = app.add_subcommand("limit-cdf", "limit process joint distribution function");
  lim->add_option("--process", process)->required();
  lim->add_option("--delta", delta);
  lim->add_option("--r", r)->delimiter(',')->required();
  lim->add_option("--s", s)->delimiter(',')->required();
  lim->add_option("--order", order);
  lim->add_option("--lcut", lcut);
  lim->add_option("--out", out)->required();

  auto* cmp = app.add_subcommand("compare", "run a comparison experiment from a JSON config");
  cmp->add_option("--kind", kind)->required();
  cmp->add_option("--config", config)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) {
      SimulationSpec spec;
      spec.flavor = parse_flavor(flavor);
      spec.params = {lambda, rho};
      spec.t = t;
      spec.r = r;
      spec.theta = theta;
      if (!theta.empty()) need_same_length(r.size(), theta.size(), "--r/--theta");
      spec.samples = samples;
      spec.seed = seed;
      spec.dt = dt;
      if (samples < 1) throw UsageError("--samples must be positive");
      const auto rows = rescaled_samples(spec);
      std::vector<SampleRow> flat;
      for (size_t i = 0; i < rows.size(); ++i)
        for (auto& x : rows[i]) flat.push_back({int64_t(i), x.r, x.theta, x.value});
      write_sample_csv(out, flat);
    } else if (*fin) {
      need_same_length(n.size(), a.size(), "--n/--a");
      FiniteTimeSpec spec;
      spec.flavor = parse_flavor(flavor);
      spec.t = t;
      spec.lambda = lambda;
      spec.rho = rho;
      spec.order = order;
      const double v = finite_t_cdf(spec, n, a);
      json meta{{"flavor", flavor}, {"t", t}, {"n", n}, {"a", a}, {"lambda", lambda}, {"rho", rho}, {"order", order}};
      std::vector<std::string> cols;
      std::vector<double> row;
      for (size_t k = 0; k < n.size(); ++k) {
        cols.push_back("n" + std::to_string(k + 1));
        cols.push_back("a" + std::to_string(k + 1));
        row.push_back(double(n[k]));
        row.push_back(a[k]);
      }
      write_cdf_csv(out, cols, {row}, {v}, order, meta_hash(meta));
    } else if (*lim) {
      need_same_length(r.size(), s.size(), "--r/--s");
      LimitSpec spec{parse_process(process), delta};
      LimitOptions opt;
      opt.order = order;
      if (lcut > 0) opt.x_cut = lcut;
      const double v = spec.process == LimitProcess::airy_stat ? cdf_airy_stat(r, s, opt) : cdf_limit(spec, r, s, opt);
      json meta{{"process", process}, {"delta", delta}, {"r", r}, {"s", s}, {"order", order}, {"lcut", lcut}};
      std::vector<std::string> cols;
      std::vector<double> row;
      for (size_t k = 0; k < r.size(); ++k) {
        cols.push_back("r" + std::to_string(k + 1));
        cols.push_back("s" + std::to_string(k + 1));
        row.push_back(r[k]);
        row.push_back(s[k]);
      }
      write_cdf_csv(out, cols, {row}, {v}, order, meta_hash(meta));
    } else if (*cmp) {
      std::ifstream f(config);
      json j;
      try {
        j = json::parse(f);
      } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
      }
      if (j.contains("kind") && j["kind"] != kind) throw UsageError("--kind disagrees with the config file");
      j["kind"] = kind;
      ExperimentConfig c;
      try {
        c = config_from_json(j);
      } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto rep = run_experiment(c);
      std::cout << (rep.pass ? "PASS" : "FAIL") << ' ' << rep.kind << " statistic=" << rep.statistic
                << " threshold=" << rep.threshold << '\n';
      return rep.pass ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
