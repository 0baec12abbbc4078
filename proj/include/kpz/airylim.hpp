#pragma once
#include <string>
#include <vector>

#include "kpz/fredholm.hpp"

namespace kpz {

enum class LimitProcess { airy2, airy2prime, airy1, airy2to1, airy2tobm, airybmto1, finite_step, airy_stat };

LimitProcess parse_process(const std::string& s);
std::string to_string(LimitProcess p);

struct LimitSpec {
  LimitProcess process = LimitProcess::airy2;
  double delta = 0;  // finite-step parameter
};

struct LimitOptions {
  int order = 60;
  double L = 10;
  double x_cut = 60;
  double h = 1e-4;  // derivative step for finite-step and airy-stat
};

// Kernel entry in the conjugated form used for the determinants.  Thresholds follow each
// process's own convention: airy2 and airy2to1 take s with the r^2 shift already removed
// (P(A2(r) <= s + r^2)), airy2prime takes the raw level.
double kernel_eval(const LimitSpec& spec, double r1, double s1, double r2, double s2);

// det(1 - chi_s K chi_s) on the multi-point domain
double limit_det(const LimitSpec& spec, const std::vector<double>& r, const std::vector<double>& s,
                 const LimitOptions& opt = {});

// joint distribution function, including the derivative prefactors where the definition has one
double cdf_limit(const LimitSpec& spec, const std::vector<double>& r, const std::vector<double>& s,
                 const LimitOptions& opt = {});

double cdf_airy_stat(const std::vector<double>& r, const std::vector<double>& s, const LimitOptions& opt = {});

double f_gue(double s, const LimitOptions& opt = {});
// F_GOE(2s)
double f_goe_2s(double s, const LimitOptions& opt = {});
double f_goe(double s, const LimitOptions& opt = {});
double baik_rains(double s, const LimitOptions& opt = {});

// one-dimensional Airy integrals shared with tests
double airy_tail_integral(double s);  // int_s^inf Ai
// int_R e^{x d} Ai(a+x) Ai(b+x) dx for d > 0
double heat_airy(double d, double a, double b);

}  // namespace kpz
