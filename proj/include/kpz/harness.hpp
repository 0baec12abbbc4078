#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "kpz/paths.hpp"

namespace kpz {

struct ExperimentConfig {
  std::string kind;  // mc-vs-finite-t, mc-vs-limit, finite-t-vs-limit, property-suite
  std::string flavor = "packed";
  std::string process;  // limit process, or the property name for property-suite
  double t = 25;
  std::vector<double> r{0.0}, theta, s, a;
  std::vector<int64_t> n_indices;
  int64_t samples = 10000;
  uint64_t seed = 0;
  double dt = 0;
  int order = 60;
  double lcut = 0;  // 0: module default
  double delta = 0;
  double lambda = 1, rho = 0.5;
  std::string out;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

class EcdfTable {
 public:
  explicit EcdfTable(std::vector<double> samples);
  size_t n() const { return v_.size(); }
  const std::vector<double>& sorted() const { return v_; }
  double operator()(double x) const;  // right-continuous
  double left(double x) const;        // limit from the left

 private:
  std::vector<double> v_;
};

EcdfTable ecdf(std::vector<double> samples);
// sup |F_n - F| over sample points (both step sides) and the extra grid points
double ks_distance(const EcdfTable& e, const std::function<double(double)>& cdf, const std::vector<double>& grid = {});
double ks_two_sample(const EcdfTable& a, const EcdfTable& b);
// half-width of the DKW band at confidence 1 - alpha
double dkw_band(size_t n, double alpha = 0.01);

// distribution function tabulated on a grid and interpolated monotonically
class TabulatedCdf {
 public:
  TabulatedCdf(std::vector<double> grid, std::vector<double> values);
  double operator()(double x) const;

 private:
  std::shared_ptr<const std::function<double(double)>> interp_;
  double lo_, hi_, ylo_, yhi_;
};
TabulatedCdf tabulate(const std::function<double(double)>& cdf, double lo, double hi, double step);

// FNV-1a of the canonical dump, as 16 hex digits
std::string meta_hash(const nlohmann::json& meta);

struct ComparisonReport {
  std::string kind;
  double statistic = 0;
  double threshold = 0;
  bool pass = false;
  nlohmann::json details = nlohmann::json::object();
  nlohmann::json meta = nlohmann::json::object();
};

nlohmann::json to_json(const ComparisonReport& r);
// JSON report; the timestamp sits alone on one line so reports compare byte-for-byte without it
void write_report(const ComparisonReport& r, const std::string& path);
std::string render_report(const ComparisonReport& r, const std::string& timestamp);

ComparisonReport run_experiment(const ExperimentConfig& c);

struct SampleRow {
  int64_t replica;
  double r, theta, value;
};
void write_sample_csv(const std::string& path, const std::vector<SampleRow>& rows);
// columns: coordinate names, value, order, meta_hash
void write_cdf_csv(const std::string& path, const std::vector<std::string>& coords,
                   const std::vector<std::vector<double>>& coord_values, const std::vector<double>& values, int order,
                   const std::string& hash);

// property experiments shared by the CLI and the acceptance suite
struct AttractivenessReport {
  int64_t pairs = 0, violations = 0;
  double worst_ratio = 0;  // max over pairs of sup|xa - xb| / sup|a - b|
};
AttractivenessReport attractiveness_check(uint64_t seed, int64_t pairs, double t, int64_t n_max, double dt = 0);

struct LlnReport {
  double mean = 0, target = 2;
  bool pass = false;
};
LlnReport lln_check(uint64_t seed, int64_t n, int64_t samples, double dt = 0);

struct IncrementReport {
  std::vector<double> r, var, ks;
  double band = 0;
  bool pass = false;
};
IncrementReport gaussian_increments(uint64_t seed, double t, const std::vector<double>& r, int64_t samples, double dt = 0);

struct DecorrelationReport {
  double ks = 0, band = 0;
  bool pass = false;
};
DecorrelationReport slow_decorrelation(uint64_t seed, double t, double r, double theta, int64_t samples, double dt = 0);

struct DensityReport {
  double mass = 0;
  int cells = 0, outside = 0;
  double worst_z = 0;
  bool pass = false;
};
// N = 2 packed density at time t against an MC histogram on a 10 x 10 grid
DensityReport density_check(uint64_t seed, double t, int64_t samples, double dt = 0);

}  // namespace kpz
