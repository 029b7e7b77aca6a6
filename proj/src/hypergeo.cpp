#include "mlab/hypergeo.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mlab {

namespace {

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Neumaier-compensated accumulator.
struct Acc {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

double term_ratio(const HypSpec& h, double n) {
  double r = h.z / (n + 1.0);
  for (double a : h.upper) r *= a + n;
  for (double b : h.lower) r /= b + n;
  return r;
}

constexpr long kMaxTerms = 50'000'000;

PfqResult sum_direct(const HypSpec& h) {
  Acc acc;
  double t = 1.0;
  int small_run = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (long n = 0; n < kMaxTerms; ++n) {
    acc.add(t);
    if (t == 0.0) return {acc.value(), 0.0};
    double at = std::abs(t);
    if (at < 1e-17 * std::abs(acc.value()) && at < prev)
      ++small_run;
    else
      small_run = 0;
    if (small_run >= 3) return {acc.value(), at};
    prev = at;
    t *= term_ratio(h, static_cast<double>(n));
  }
  throw std::runtime_error("pfq: series did not converge within the term budget");
}

// Partial sums at N0 * 2^j terms (pairs of terms when alternating), then
// Richardson elimination of the tail exponents p0, p0 + 1, ...
PfqResult sum_unit_circle(const HypSpec& h, double s) {
  constexpr long kN0 = 16;
  constexpr int kLevels = 11;
  const bool alt = h.z < 0;
  const long step = alt ? 2 : 1;
  std::vector<double> parts;
  Acc acc;
  double t = 1.0;
  long next = kN0 * step;
  long total = kN0 * step * (1L << (kLevels - 1));
  for (long n = 0; n < total; ++n) {
    acc.add(t);
    t *= term_ratio(h, static_cast<double>(n));
    if (n + 1 == next) {
      parts.push_back(acc.value());
      next *= 2;
    }
  }
  const double p0 = alt ? s + 1.0 : s;
  std::vector<std::vector<double>> tab(parts.size());
  for (std::size_t j = 0; j < parts.size(); ++j) {
    tab[j].push_back(parts[j]);
    for (std::size_t k = 1; k <= j; ++k) {
      double f = std::pow(2.0, p0 + static_cast<double>(k) - 1.0);
      tab[j].push_back((f * tab[j][k - 1] - tab[j - 1][k - 1]) / (f - 1.0));
    }
  }
  const auto& last = tab.back();
  return {last.back(), std::abs(last.back() - last[last.size() - 2])};
}

}  // namespace

double gamma_fn(double x) {
  if (nonpositive_integer(x))
    throw std::domain_error("gamma_fn: pole at non-positive integer " + std::to_string(x));
  return std::tgamma(x);
}

double digamma(double x) {
  if (nonpositive_integer(x))
    throw std::domain_error("digamma: pole at non-positive integer " + std::to_string(x));
  return boost::math::digamma(x);
}

double pfq(const HypSpec& spec) { return pfq_detail(spec).value; }

PfqResult pfq_detail(const HypSpec& spec) {
  HypSpec h = spec;
  std::sort(h.upper.begin(), h.upper.end());
  std::sort(h.lower.begin(), h.lower.end());
  for (double b : h.lower)
    if (nonpositive_integer(b))
      throw std::domain_error("pfq: lower parameter " + std::to_string(b) +
                              " is a non-positive integer");
  if (!std::isfinite(h.z)) throw std::domain_error("pfq: z is not finite");
  if (h.z == 0.0) return {1.0, 0.0};
  const bool terminating = std::any_of(h.upper.begin(), h.upper.end(), nonpositive_integer);
  if (terminating) return sum_direct(h);
  const std::size_t p = h.upper.size(), q = h.lower.size();
  if (p > q + 1) throw std::domain_error("pfq: p > q + 1 diverges for z != 0");
  if (p <= q) return sum_direct(h);
  const double az = std::abs(h.z);
  if (az < 1.0) return sum_direct(h);
  if (az > 1.0)
    throw std::domain_error("pfq: |z| = " + std::to_string(az) + " > 1 outside the disk");
  double s = 0.0;
  for (double b : h.lower) s += b;
  for (double a : h.upper) s -= a;
  if (!(s > 0.0))
    throw std::domain_error("pfq: |z| = 1 requires sum(lower) - sum(upper) > 0, got " +
                            std::to_string(s));
  return sum_unit_circle(h, s);
}

double pfq(std::vector<double> upper, std::vector<double> lower, double z) {
  return pfq(HypSpec{std::move(upper), std::move(lower), z});
}

double hyp2f1_13_23_1_series(double z) {
  if (!(z >= 0.0 && z < 1.0)) throw std::domain_error("hyp2f1_13_23_1: need 0 <= z < 1");
  return pfq({1.0 / 3.0, 2.0 / 3.0}, {1.0}, z);
}

double hyp2f1_13_23_1_connection(double z) {
  if (!(z > 0.0 && z < 1.0)) throw std::domain_error("hyp2f1_13_23_1: need 0 < z < 1");
  const double a = 1.0 / 3.0, b = 2.0 / 3.0;
  const double w = 1.0 - z;
  const double lw = std::log(w);
  Acc acc;
  double coef = 1.0, wn = 1.0;
  for (int n = 0; n < 2000; ++n) {
    double dn = static_cast<double>(n);
    double br = 2.0 * digamma(dn + 1.0) - digamma(a + dn) - digamma(b + dn) - lw;
    double term = coef * br * wn;
    acc.add(term);
    if (n > 2 && std::abs(term) < 1e-18 * std::abs(acc.value())) break;
    coef *= (a + dn) * (b + dn) / ((dn + 1.0) * (dn + 1.0));
    wn *= w;
  }
  return std::sqrt(3.0) / (2.0 * std::numbers::pi) * acc.value();
}

double hyp2f1_13_23_1(double z) {
  if (!(z >= 0.0)) throw std::domain_error("hyp2f1_13_23_1: need z >= 0");
  if (z >= 1.0) throw std::domain_error("hyp2f1_13_23_1: diverges at z >= 1");
  return z <= 0.9 ? hyp2f1_13_23_1_series(z) : hyp2f1_13_23_1_connection(z);
}

}  // namespace mlab
