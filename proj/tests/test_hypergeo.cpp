#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mlab/hypergeo.hpp"

using namespace mlab;
using std::numbers::pi;

namespace {
constexpr double kEuler = 0.57721566490153286061;
}

TEST_CASE("gamma_fn") {
  CHECK(std::abs(gamma_fn(0.5) - std::sqrt(pi)) < 1e-15);
  CHECK(gamma_fn(5.0) == 24.0);
  CHECK(std::abs(gamma_fn(1.0 / 3) * gamma_fn(2.0 / 3) - 2 * pi / std::sqrt(3.0)) < 1e-13);
  double fact = 1.0;
  for (int n = 1; n <= 20; ++n) {
    CHECK(std::abs(gamma_fn(n) - fact) <= 1e-15 * fact);
    fact *= n;
  }
  CHECK(std::abs(gamma_fn(-0.5) + 2 * std::sqrt(pi)) < 1e-14);
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}

TEST_CASE("digamma") {
  CHECK(std::abs(digamma(1.0) + kEuler) < 1e-14);
  CHECK(std::abs(digamma(0.5) + kEuler + 2 * std::log(2.0)) < 1e-14);
  CHECK(std::abs(digamma(2.0) - 1 + kEuler) < 1e-14);
  CHECK_THROWS_AS(digamma(-1.0), std::domain_error);
}

TEST_CASE("pfq: elementary values") {
  CHECK(pfq({0.3, 1.7}, {2.5}, 0.0) == 1.0);
  CHECK(std::abs(pfq({1, 1}, {2}, 0.5) - 2 * std::log(2.0)) < 1e-14);
  // 1F0(a;;z) = (1 - z)^-a
  CHECK(std::abs(pfq({0.7}, {}, -0.4) - std::pow(1.4, -0.7)) < 1e-14);
  // 0F0 = exp
  CHECK(std::abs(pfq({}, {}, 2.0) - std::exp(2.0)) < 1e-13);
  // terminating series
  CHECK(std::abs(pfq({-2, 1}, {1}, 3.0) - 4.0) < 1e-14);
}

TEST_CASE("pfq: unit-circle values against independent high-precision oracle") {
  // Values computed with mpmath.hyper at 30 digits.
  CHECK(std::abs(pfq({1. / 3, 1. / 3, 1}, {2. / 3, 4. / 3}, 1.0) - 1.5420727186944159) < 1e-11);
  CHECK(std::abs(pfq({2. / 3, 2. / 3, 1}, {4. / 3, 5. / 3}, 1.0) - 1.5979296476157015) < 1e-11);
  CHECK(std::abs(pfq({0.5, 0.5, 0.5}, {1.5, 1}, 1.0) - 1.1662436161232751) < 1e-11);
  CHECK(std::abs(pfq({1.5, 1.5, 1, 1}, {2, 2, 2}, 1.0) - 1.7604059599729240) < 1e-11);
  CHECK(std::abs(pfq({0.5, 0.5, 0.5}, {1.5, 1}, -1.0) - 0.93589980044130907) < 1e-11);
  CHECK(std::abs(pfq({4. / 3, 5. / 3, 1, 1}, {2, 2, 2}, -1.0) - 0.80511528168457038) < 1e-11);
  CHECK_THROWS_AS(pfq({1, 1}, {2}, -1.0), std::domain_error);
}

TEST_CASE("pfq: domain errors") {
  CHECK_THROWS_AS(pfq({1, 1}, {1}, 1.0), std::domain_error);
  CHECK_THROWS_AS(pfq({1, 1}, {2}, 1.5), std::domain_error);
  CHECK_THROWS_AS(pfq({1, 1}, {-2}, 0.5), std::domain_error);
  CHECK_THROWS_AS(pfq({1, 1, 1}, {2}, 0.5), std::domain_error);
}

TEST_CASE("pfq: permutation symmetry is bit-identical") {
  double a = pfq({0.2, 1.3, 0.7}, {1.9, 2.4}, 0.83);
  double b = pfq({1.3, 0.7, 0.2}, {2.4, 1.9}, 0.83);
  CHECK(a == b);
}

TEST_CASE("pfq: Gauss contiguous relation") {
  // c(c-1)(z-1) F(c-1) + c[c-1-(2c-a-b-1)z] F(c) + (c-a)(c-b) z F(c+1) = 0
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.1, 1.5);
  for (int i = 0; i < 20; ++i) {
    double a = U(rng), b = U(rng), c = 1.0 + U(rng), z = 0.8 * U(rng) / 1.5;
    double fm = pfq({a, b}, {c - 1}, z), f0 = pfq({a, b}, {c}, z), fp = pfq({a, b}, {c + 1}, z);
    double rec = -(c * (c - 1 - (2 * c - a - b - 1) * z) * f0 + (c - a) * (c - b) * z * fp) /
                 (c * (c - 1) * (z - 1));
    CHECK(std::abs(rec - fm) < 1e-10);
  }
}

TEST_CASE("pfq: partial sums increase to the result") {
  double z = 0.9;
  double v = pfq({0.5, 0.5, 0.5}, {1.5, 1}, z);
  double t = 1, s = 0;
  for (int n = 0; n < 400; ++n) {
    s += t;
    CHECK(s <= v);
    t *= (0.5 + n) * (0.5 + n) * (0.5 + n) / ((1.5 + n) * (1.0 + n)) * z / (n + 1);
  }
}

TEST_CASE("hyp2f1_13_23_1") {
  CHECK(hyp2f1_13_23_1(0.0) == 1.0);
  // mpmath.hyp2f1(1/3, 2/3, 1, 1/2)
  CHECK(std::abs(hyp2f1_13_23_1(0.5) - 1.1595952669639284) < 1e-12);
  CHECK(std::abs(hyp2f1_13_23_1_series(0.9) - hyp2f1_13_23_1_connection(0.9)) < 1e-10);
  // mpmath.hyp2f1(1/3, 2/3, 1, 0.99)
  CHECK(std::abs(hyp2f1_13_23_1(0.99) - 2.1813526420418225) < 1e-11);
  CHECK_THROWS_AS(hyp2f1_13_23_1(1.0), std::domain_error);
  // logarithmic growth: equal increments per decade of 1 - z
  double prev = hyp2f1_13_23_1(1 - 1e-4);
  const double slope = std::sqrt(3.0) / (2 * pi) * std::log(10.0);
  double dev = 1.0;
  for (int k = 5; k <= 8; ++k) {
    double cur = hyp2f1_13_23_1(1 - std::pow(10.0, -k));
    double d = std::abs((cur - prev) - slope);
    CHECK(d < 1e-3);
    CHECK(d < dev);
    dev = d;
    prev = cur;
  }
}
