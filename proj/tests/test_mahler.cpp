#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "mlab/lvalues.hpp"
#include "mlab/mahler.hpp"

using namespace mlab;
using std::numbers::pi;

namespace {

// Midpoint rule on an n x n grid of the torus.
double brute_m(double alpha, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = 2 * pi * (i + 0.5) / n;
    std::complex<double> X = std::polar(1.0, x);
    for (int j = 0; j < n; ++j) {
      double y = 2 * pi * (j + 0.5) / n;
      std::complex<double> Y = std::polar(1.0, y);
      acc += std::log(std::abs(alpha + X + 1.0 / X + Y + 1.0 / Y));
    }
  }
  return acc / (double(n) * n);
}

}  // namespace

TEST_CASE("mahler_direct: trivial and reference values") {
  CHECK(std::abs(mahler_direct(Family::G, 0)) < 1e-10);
  CHECK(std::abs(g_leading_term()) < 1e-12);
  double m2 = mahler_direct(Family::M, 2);
  CHECK(std::abs(mahler_direct(Family::M, 8) - 4 * m2) < 1e-8);
  CHECK(std::abs(m2 - brute_m(2, 2048)) < 1e-4);
  CHECK(std::abs(mahler_direct(Family::M, 3) - mahler_direct(Family::M, -3)) < 1e-9);
  // m(1 + X + Y)
  CHECK(std::abs(mahler_direct(Family::N, 0) - 0.3230659472194505) < 1e-9);
}

TEST_CASE("mahler_hyper") {
  CHECK(mahler_hyper(Family::M, 0) == 0.0);
  CHECK(std::abs(mahler_hyper(Family::M, 2) - mahler_direct(Family::M, 2)) < 1e-8);
  CHECK(std::abs(mahler_hyper(Family::M, 4) - mahler_direct(Family::M, 4)) < 1e-8);
  CHECK(std::abs(mahler_hyper(Family::M, -6) - mahler_direct(Family::M, -6)) < 1e-8);
  double a = 100;
  double lead = (mahler_hyper(Family::N, a) - std::log(a)) / (-2 / (a * a * a));
  CHECK(std::abs(lead - 1) < 1e-4);
  CHECK(std::abs(mahler_hyper(Family::M, 1e3) - std::log(1e3)) < 1e-5);
  CHECK_THROWS_AS(mahler_hyper(Family::M, -2), std::domain_error);
  CHECK_THROWS_AS(mahler_hyper(Family::N, 2), std::domain_error);
  CHECK_THROWS_AS(mahler_hyper(Family::G, 4), std::domain_error);
  CHECK_THROWS_AS(mahler_hyper(Family::G, 8.2), std::domain_error);
  CHECK_THROWS_AS(mahler_hyper(Family::G, 11.95), std::domain_error);
  CHECK(std::abs(mahler_hyper(Family::G, 12) - mahler_direct(Family::G, 12)) < 1e-8);
}

TEST_CASE("f_aux") {
  for (double z : {1e-4, 1e-6}) CHECK(std::abs((f_aux(z) + std::log(z) / 3) / z + 2) < 1e-2);
  CHECK(std::abs(f_aux(1.0 / 64) - mahler_direct(Family::N, 4)) < 1e-8);
  CHECK(std::abs(g_f_decomposition(10) - mahler_direct(Family::G, 10)) < 1e-8);
  CHECK_THROWS_AS(f_aux(0.0), std::domain_error);
  CHECK_THROWS_AS(f_aux(0.04), std::domain_error);
}

TEST_CASE("g_via_J") {
  CHECK(std::abs(g_via_J(4) - mahler_direct(Family::G, 4)) < 1e-8);
  CHECK(std::abs(g_via_J(2) - 9 / (2 * pi * pi) * L_elliptic(36)) < 1e-8);
  CHECK(std::abs(g_via_J(8) - g_f_decomposition(8)) < 1e-6);
  CHECK(std::abs(g_f_decomposition(8.5) - mahler_direct(Family::G, 8.5)) < 1e-8);
  CHECK_THROWS_AS(g_via_J(1.9), std::domain_error);
  CHECK_THROWS_AS(g_via_J(8.1), std::domain_error);
}

TEST_CASE("functional equations") {
  auto m = [](double a) { return mahler(MahlerQuery{Family::M, a, Route::Auto}); };
  for (double a : {0.2, 0.5, 0.9}) {
    double lhs = 2 * m(2 * (std::pow(a, 0.25) + std::pow(a, -0.25)));
    double rhs = m(4 * std::sqrt(a)) + m(4 / std::sqrt(a));
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
  for (double p : {0.3, 0.6}) {
    double lhs = g_value(4 * p * (1 + p)) + g_value(4 * (1 + p) / (p * p));
    double rhs = 2 * g_value(2 * (1 + p) * (1 + p) / p);
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("route policy and parsing") {
  CHECK(parse_family("g") == Family::G);
  CHECK(parse_route("hyper") == Route::Hyper);
  CHECK_THROWS_AS(parse_family("x"), std::invalid_argument);
  CHECK(std::abs(g_value(-2) - mahler_direct(Family::G, -2)) < 1e-14);
  CHECK(std::abs(g_value(5) - g_via_J(5)) < 1e-14);
  CHECK(std::abs(n_value(1.5) - mahler_direct(Family::N, 1.5)) < 1e-14);
  CHECK(std::abs(g_value(10) - mahler_direct(Family::G, 10)) < 1e-14);
  CHECK(std::abs(g_value(13) - g_f_decomposition(13)) < 1e-14);
  CHECK_THROWS_AS(mahler(MahlerQuery{Family::M, 3, Route::JIntegral}), std::domain_error);
}
