#pragma once

#include <vector>

namespace mlab {

struct HypSpec {
  std::vector<double> upper;
  std::vector<double> lower;
  double z = 0.0;
};

double gamma_fn(double x);
double digamma(double x);

// Generalized hypergeometric series pFq. Handles |z| < 1 by direct summation
// and |z| = 1 (p = q + 1, sum(lower) - sum(upper) > 0) by Richardson
// extrapolation of partial sums.
struct PfqResult {
  double value = 0.0;
  // Last term retained (direct sums) or the last Richardson correction.
  double err_estimate = 0.0;
};

double pfq(const HypSpec& spec);
PfqResult pfq_detail(const HypSpec& spec);
double pfq(std::vector<double> upper, std::vector<double> lower, double z);

// 2F1(1/3, 2/3; 1; z) on [0, 1), switching to the logarithmic connection
// formula in powers of 1 - z above z = 0.9.
double hyp2f1_13_23_1(double z);
double hyp2f1_13_23_1_series(double z);
double hyp2f1_13_23_1_connection(double z);

}  // namespace mlab
