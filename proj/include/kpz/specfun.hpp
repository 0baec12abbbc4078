#pragma once
#include <complex>

namespace kpz {

double airy_ai(double x);

// Ai(x) exp(2/3 x^{3/2}) for x > 0; plain Ai(x) for x <= 0
double airy_ai_scaled(double x);

// exp(a) * Ai(x) without intermediate overflow or underflow
double exp_ai(double a, double x);

// principal branch; throws on the cut z < -1/e
std::complex<double> lambert_w0(std::complex<double> z);

// Gaussian transition density between "times" r1 < r2
double heat_kernel(double r1, double r2, double s1, double s2);

}  // namespace kpz
