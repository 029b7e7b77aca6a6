#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mlab/elliptic.hpp"
#include "mlab/hypergeo.hpp"
#include "mlab/numerics.hpp"
#include "mlab/qseries.hpp"

using namespace mlab;
using std::numbers::pi;

TEST_CASE("modulus_params") {
  auto m = modulus_params(1e-12);
  CHECK(std::abs(m.bigK - pi / 2) < 1e-11);
  auto h = modulus_params(0.5);
  CHECK(std::abs(h.nome - std::exp(-pi)) < 1e-13);
  auto t = modulus_params(0.3);
  CHECK(std::abs(t.bigK - pi / 2 * pfq({0.5, 0.5}, {1.0}, 0.3)) < 1e-12);
  CHECK(std::abs(t.bigKprime - pi / 2 * pfq({0.5, 0.5}, {1.0}, 0.7)) < 1e-12);
  CHECK_THROWS_AS(modulus_params(0.0), std::domain_error);
  CHECK_THROWS_AS(modulus_params(1.0), std::domain_error);
}

TEST_CASE("jacobi") {
  auto z = jacobi(0.0, 0.4);
  CHECK(z.sn == 0.0);
  CHECK(z.cn == 1.0);
  CHECK(z.dn == 1.0);
  double K = modulus_params(0.4).bigK;
  CHECK(std::abs(jacobi(K, 0.4).sn - 1.0) < 1e-13);
  auto v = jacobi(0.7, 0.4);
  CHECK(std::abs(v.sn * v.sn + v.cn * v.cn - 1) < 1e-12);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-5, 5), A(0.01, 0.99);
  for (int i = 0; i < 100; ++i) {
    double u = U(rng), a = A(rng);
    auto j = jacobi(u, a);
    CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1) < 1e-12);
    CHECK(std::abs(j.dn * j.dn + a * j.sn * j.sn - 1) < 1e-12);
  }
}

TEST_CASE("ell_pi3") {
  for (double a : {0.1, 0.5, 0.9}) CHECK(std::abs(ell_pi3(0.0, a) - modulus_params(a).bigK) < 1e-12);
  for (double n : {-2.0, -0.3, 0.5, 0.9})
    CHECK(std::abs(ell_pi3(n, 0.0) - pi / (2 * std::sqrt(1 - n))) < 1e-12);
  for (double a : {0.1, 0.3, 0.7}) {
    double s = std::sqrt(a);
    double h = -modulus_params(a).bigK - (1 - s) * (1 - s) / (2 * s) * ell_pi3(s, a) +
               (1 + s) * (1 + s) / (2 * s) * ell_pi3(-s, a);
    CHECK(std::abs(h - pi / 4) < 1e-11);
  }
  CHECK_THROWS_AS(ell_pi3(1.0, 0.5), std::domain_error);
}

TEST_CASE("wp") {
  const double g2 = w_g2(2), g3 = w_g3(2);
  std::complex<double> z(1e-3, 0);
  CHECK(std::abs(wp(z, g2, g3) * z * z - 1.0) < 1e-5);
  CHECK(std::abs(wp(0.4, g2, g3) - wp(-0.4, g2, g3)) < 1e-12);

  std::complex<double> z0(0.3, 0.1);
  double h = 1e-3;
  auto f = [&](std::complex<double> s) { return wp(s, g2, g3); };
  auto d = (8.0 * (f(z0 + h) - f(z0 - h)) - (f(z0 + 2 * h) - f(z0 - 2 * h))) / (12 * h);
  auto p = f(z0);
  double scale = std::abs(4.0 * p * p * p);
  CHECK(std::abs(d * d - 4.0 * p * p * p + g2 * p + g3) <= 1e-8 * scale);
  CHECK_THROWS_AS(wp(0.0, g2, g3), std::domain_error);
}

TEST_CASE("w-curve periods") {
  auto p = w_periods(2);
  CHECK(p.g2 == doctest::Approx(-4.0 / 3.0 * 11));
  CHECK(std::abs(p.periodK - 1.1370825995195) < 1e-11);
  CHECK(std::abs(p.periodK - w_period_direct(2)) < 1e-9);
  CHECK(std::abs(p.periodKprime.real()) <= 1e-9 * std::abs(p.periodKprime));
  CHECK(std::abs(p.periodKprime.imag() - 1.412187570986) < 1e-10);
  CHECK(w_periods(3).periodK < p.periodK);
  CHECK_THROWS_AS(w_periods(4.0 / 3.0), std::domain_error);
  double q = std::exp(-pi * std::abs(p.periodKprime) / (3 * p.periodK));
  CHECK(std::abs(q - w_nome(2)) < 1e-10);
}

TEST_CASE("w-curve values") {
  const double k = 2;
  auto P = w_periods(k);
  const double K = P.periodK;
  CHECK(std::abs(w_curve(K, P) - 1.0) < 1e-10);
  double r1 = w_curve(1e-3, P) / 1e-6, r2 = w_curve(2e-3, P) / 4e-6;
  CHECK(std::abs(r1 - (1 - k) * (1 - k)) < 1e-4);
  CHECK(std::abs(r1 - r2) < 1e-4);

  for (double x : {0.2 * K, 0.6 * K, 1.3 * K}) {
    auto fn = [&](double s) { return w_curve(s, P); };
    double w = fn(x), dw = central_diff(fn, x, 1e-3);
    CHECK(std::abs(dw * dw - 4 * w * ((1 - k) * (1 - k) - w * (1 - k * w) * (1 - k * w))) < 1e-6);
  }

  auto F = w_fourier(K, k, 200);
  CHECK(std::abs(F.w - 1.0) < 1e-10);
  CHECK(std::abs(F.logform - std::log(5.0)) < 1e-10);
  auto G = w_fourier(0.6 * K, k, 200);
  CHECK(std::abs(G.w - w_curve(0.6 * K, P)) < 1e-8);
  CHECK(std::abs(G.w - 0.446517268768) < 1e-10);
  CHECK(std::abs(G.logform - std::log(1 - 2 * k / (1 - k) * G.w)) < 1e-10);
  CHECK(G.tail_bound < 1e-20);
}

TEST_CASE("w-curve nome and signature-3 multipliers") {
  const double k = 2;
  double q = w_nome(k);
  double p = 0.5 * (-1 + std::sqrt((3 * k - 1) / (k - 1)));
  double ph1 = eval_numeric(phi(), q).real(), ph3 = eval_numeric(phi(), q * q * q).real();
  CHECK(std::abs(1 + 2 * p - ph1 * ph1 / (ph3 * ph3)) < 1e-10);
  double K = w_periods(k).periodK;
  CHECK(std::abs(2 * K + pi * eval_numeric(with_negated_arg(a_fn()), q).real()) < 1e-9);
}
