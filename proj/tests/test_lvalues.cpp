#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mlab/hypergeo.hpp"
#include "mlab/lvalues.hpp"
#include "mlab/mahler.hpp"
#include "mlab/numerics.hpp"
#include "mlab/qseries.hpp"

using namespace mlab;
using std::numbers::pi;

TEST_CASE("F_cube basics") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> D(1, 9);
  for (int i = 0; i < 20; ++i) {
    LatticeSumSpec s{double(D(rng)) / D(rng), double(D(rng)) / D(rng)};
    CHECK(F_cube(s, 0) == 1.0);
  }
  LatticeSumSpec s{0.7, 2.5}, t{2.5, 0.7};
  CHECK(std::abs(F_cube(s, 3) - F_cube(t, 3)) < 1e-14);
  CHECK_THROWS_AS(F_cube(s, kCubeMaxN + 1), std::domain_error);
  CHECK_THROWS_AS(F_cube({-1, 1}, 2), std::domain_error);
}

TEST_CASE("F_cube kernels agree bit for bit") {
  if (!avx2_available()) return;
  for (int N : {1, 4, 9}) {
    LatticeSumSpec s{2, 3};
    CubeOptions a{CubeKernel::Scalar, 1, {}}, b{CubeKernel::Avx2, 3, {}};
    CHECK(F_cube(s, N, a) == F_cube(s, N, b));
  }
}

TEST_CASE("F_cube accumulation order and convergence") {
  double pw = F_cube({2, 3}, 10), sq = F_cube_sequential({2, 3}, 10);
  CHECK(std::abs(pw - sq) < 1e-12 * std::abs(pw));
  double F = F_integral({2, 3});
  double prev = 1.0;
  for (int N : {10, 20, 40}) {
    double gap = std::abs(F_cube({2, 3}, N) - F);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev <= 1e-2);
  CHECK(std::abs(F_cube({1, 1}, 20) - F_integral({1, 1})) < 1e-2);
  double last = -1;
  CubeOptions o;
  o.progress = [&](double f) { last = f; };
  F_cube({1, 2}, 5, o);
  CHECK(last == 1.0);
}

TEST_CASE("L-values and lattice sums") {
  CHECK(std::abs(F_integral({2, 3}) - L_elliptic(24)) < 1e-9);
  CHECK(std::abs(F_integral({1, 5}) - L_elliptic(20)) < 1e-9);
  CHECK(std::abs(L_elliptic(24) - pi * pi / 6 * mahler_direct(Family::M, 2)) < 1e-8);
  CHECK(std::abs(L_elliptic(36) - 2 * pi * pi / 9 * g_value(2)) < 1e-8);
  double e27 = std::pow(gamma_fn(1.0 / 3), 3) / 27 * pfq({1.0 / 3, 1.0 / 3, 1}, {2.0 / 3, 4.0 / 3}, 1) -
               std::pow(gamma_fn(2.0 / 3), 3) / 18 * pfq({2.0 / 3, 2.0 / 3, 1}, {4.0 / 3, 5.0 / 3}, 1);
  CHECK(std::abs(L_elliptic(27) - e27) < 1e-8);
  CHECK_THROWS_AS(L_elliptic(11), std::domain_error);
}

TEST_CASE("H, G, S integrals") {
  double h1 = H_eval(1, HMethod::Definition);
  CHECK(std::abs(h1 + 9 * F_integral({1, 3})) < 1e-7);
  CHECK(std::abs(h1 - H_eval(1, HMethod::Reduced)) < 1e-7);
  CHECK(std::abs(H_eval(1, HMethod::Elementary) + 9 * L_elliptic(27)) < 1e-7);
  CHECK(std::abs(H_eval(1.0 / 3, HMethod::Elementary) - H_eval(1.0 / 3, HMethod::Definition)) < 1e-7);
  CHECK_THROWS_AS(H_eval(2, HMethod::Elementary), std::domain_error);

  CHECK(std::abs(G_eval(1, GMethod::ElementaryX1) + 4 * L_elliptic(24)) < 1e-7);
  CHECK(std::abs(G_eval(0.5, GMethod::Definition) + pi * pi * std::log(2.0) / 3) < 1e-7);
  CHECK(std::abs(G_eval(1, GMethod::Definition) - G_eval(1, GMethod::RealReduced)) < 1e-6);
  CHECK_THROWS_AS(G_eval(2, GMethod::ElementaryX1), std::domain_error);

  double s1 = S_eval(1, SMethod::Definition), s5 = S_eval(5, SMethod::Definition);
  CHECK(std::abs(s1 - s5 + 4 * L_elliptic(20)) < 1e-6);
  CHECK(std::abs(s1 - S_eval(1, SMethod::Reduced)) < 1e-6);
  CHECK_NOTHROW(S_reduced_integrand(0.3, 1));
}

TEST_CASE("J, T5 and the cubic transformation") {
  CHECK(std::abs(J_y(4) - mahler_direct(Family::G, 4)) < 1e-8);
  CHECK(std::abs(J_y(2) - 9 / (2 * pi * pi) * L_elliptic(36)) < 1e-8);
  double d = central_diff([](double y) { return J_y(y); }, 5, 1e-2);
  CHECK(std::abs(d - T5_hyper(5)) < 1e-6);
  for (double y : {2.0, 5.0, 7.0}) CHECK(std::abs(T5_integral(y) - T5_hyper(y)) < 1e-9);
  CHECK(std::abs(T5a_lhs(0.7) - T5a_rhs(0.7)) < 1e-10);
  CHECK_THROWS_AS(J_y(9), std::domain_error);
}

TEST_CASE("F1, F2 and the g_n series") {
  for (double L : {1.0, 2.0, 5.0}) {
    auto f = F1_F2(L);
    CHECK(std::abs(f.F1 - f.F2 - lemk1_rhs(L)) < 1e-8);
    CHECK(std::abs(f.F1 - lemk2_rhs(L)) < 1e-8);
  }
  auto f2 = F1_F2(2);
  CHECK(std::abs(pi / 12 * (f2.F2 - 3 * f2.F1) - G_eval(1, GMethod::ElementaryX1)) < 1e-9);
  double t = F1_F2(100).F1 - pi / 2 * std::log(400.0) - pi / 2;
  CHECK(t > -1e-3);
  CHECK(t < 0);
  CHECK(std::abs(gn_series(0.5, 30) - gn_integral(0.5)) < 1e-8);
  CHECK(std::abs(gn_coefficient(0) - pi / 2) < 1e-15);
}

TEST_CASE("conductor 20") {
  double e = elementary_E20();
  CHECK(e > 0);
  CHECK(std::abs(e - L_elliptic(20)) < 1e-8);
  CHECK(std::abs(10 / (pi * pi) * e - mahler_direct(Family::G, 4)) < 1e-7);
  CHECK(std::abs(cond20_closed_form(2) - 10 / (pi * pi) * L_elliptic(20)) < 1e-7);
  CHECK(std::abs(cond20_closed_form(3) - J_y(3)) < 1e-7);
  CHECK(std::abs(cond20_closed_form_p(1) - J_y(8)) < 1e-6);
  CHECK_THROWS_AS(cond20_closed_form(1.2), std::domain_error);
}

TEST_CASE("modular relations") {
  for (double q : {0.05, 0.15}) {
    double ph = eval_numeric(phi(), q).real(), ph5 = eval_numeric(phi(), std::pow(q, 5)).real();
    double m = ph * ph / (ph5 * ph5);
    double a = modular_alpha(q);
    CHECK(std::abs(4 * a * (1 - a) - (m - 1) * std::pow(5 - m, 5) / (64 * std::pow(m, 5))) < 1e-10);
    double r = eval_numeric(psineg(), std::pow(q, 5)).real() / eval_numeric(psineg(), q).real();
    CHECK(std::abs(1 - q * q * std::pow(r, 4) - 8 * (3 - m) / ((5 - m) * (5 - m))) < 1e-10);
  }
  double q = 0.1, a = modular_alpha(q), b = modular_alpha(q * q * q);
  double lhs = std::pow(a * a + b * b + 6 * a * b, 2);
  double rhs = 16 * a * b * std::pow(4 * (1 + a * b) - 3 * (a + b), 2);
  CHECK(std::abs(lhs - rhs) < 1e-9);
  // p with beta = p^3(2+p)/(1+2p), by bisection
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    double p = 0.5 * (lo + hi);
    (p * p * p * (2 + p) / (1 + 2 * p) < b ? lo : hi) = p;
  }
  double p = lo;
  CHECK(std::abs(p * std::pow(2 + p, 3) / std::pow(1 + 2 * p, 3) - a) < 1e-9);
  // degree 2: alpha(q^{1/2}) = 4 sqrt(alpha)/(1 + sqrt(alpha))^2 with alpha = alpha(q)
  double s = std::sqrt(a);
  CHECK(std::abs(modular_alpha(std::sqrt(q)) - 4 * s / ((1 + s) * (1 + s))) < 1e-12);
  CHECK(std::abs(modular_alpha(q * q) - 4 * s / ((1 + s) * (1 + s))) > 1e-2);
}
