#include "mlab/elliptic.hpp"

#include <boost/math/special_functions/ellint_3.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlab/hypergeo.hpp"
#include "mlab/numerics.hpp"

namespace mlab {

using std::numbers::pi;
using C = std::complex<double>;

namespace {

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error(std::string(who) + ": alpha must lie in (0, 1), got " +
                            std::to_string(alpha));
}

constexpr double kMinK = 4.0 / 3.0 + 1e-6;

void check_k(double k, const char* who) {
  if (!(k >= kMinK))
    throw std::domain_error(std::string(who) + ": k must exceed 4/3 (degenerate curve), got " +
                            std::to_string(k));
}

}  // namespace

double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    double an = 0.5 * (a + b);
    double bn = std::sqrt(a * b);
    if (std::abs(an - bn) <= 1e-16 * an) return an;
    a = an;
    b = bn;
  }
  return 0.5 * (a + b);
}

ModulusParams modulus_params(double alpha) {
  check_alpha(alpha, "modulus_params");
  ModulusParams m;
  m.alpha = alpha;
  m.bigK = pi / (2.0 * agm(1.0, std::sqrt(1.0 - alpha)));
  m.bigKprime = pi / (2.0 * agm(1.0, std::sqrt(alpha)));
  m.nome = std::exp(-pi * m.bigKprime / m.bigK);
  return m;
}

JacobiValues jacobi(double u, double alpha) {
  check_alpha(alpha, "jacobi");
  JacobiValues v;
  v.sn = boost::math::jacobi_elliptic(std::sqrt(alpha), u, &v.cn, &v.dn);
  return v;
}

double ell_pi3(double n, double alpha) {
  if (!(n < 1.0)) throw std::domain_error("ell_pi3: n must be < 1 (principal values unsupported)");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("ell_pi3: alpha must lie in [0, 1)");
  return boost::math::ellint_3(std::sqrt(alpha), n);
}

// Laurent coefficients c_k of z^{2k-2}, k >= 2.
std::complex<double> wp(C z, double g2, double g3) {
  if (z == C(0.0)) throw std::domain_error("wp: pole at z = 0");
  constexpr int kTerms = 11;  // through z^20
  double c[kTerms + 1] = {};
  c[2] = g2 / 20.0;
  c[3] = g3 / 28.0;
  for (int k = 4; k <= kTerms; ++k) {
    double s = 0.0;
    for (int m = 2; m <= k - 2; ++m) s += c[m] * c[k - m];
    c[k] = 3.0 * s / ((2.0 * k + 1.0) * (k - 3.0));
  }
  double scale = std::max({1.0, std::pow(std::abs(g2), 0.25), std::pow(std::abs(g3), 1.0 / 6.0)});
  int m = 0;
  C z0 = z;
  while (std::abs(z0) * scale > 0.125) {
    z0 *= 0.5;
    ++m;
  }
  C z2 = z0 * z0, pw = 1.0, p = 1.0 / z2;
  for (int k = 2; k <= kTerms; ++k) {
    p += c[k] * pw * z2;
    pw *= z2;
  }
  for (int i = 0; i < m; ++i) {
    C den = 4.0 * p * p * p - g2 * p - g3;
    if (std::abs(den) < 1e-300) throw std::domain_error("wp: argument is too close to a lattice point");
    C num = (p * p + g2 / 4.0) * (p * p + g2 / 4.0) + 2.0 * g3 * p;
    p = num / den;
  }
  if (!std::isfinite(p.real()) || !std::isfinite(p.imag()) || std::abs(p) > 1e150)
    throw std::domain_error("wp: argument is too close to a lattice point");
  return p;
}

double w_g2(double k) { return -4.0 / 3.0 * (6 * k * k * k - 12 * k * k + 6 * k - 1); }

double w_g3(double k) {
  double k2 = k * k;
  return 4.0 / 27.0 * (2 - 6 * k + 3 * k2) * (1 - 6 * k + 12 * k2 - 18 * k2 * k + 9 * k2 * k2);
}

WCurveParams w_periods(double k) {
  check_k(k, "w_periods");
  WCurveParams p;
  p.k = k;
  p.g2 = w_g2(k);
  p.g3 = w_g3(k);
  // 4X^3 - g2 X - g3 = 4 (X - r1)(X^2 + r1 X + r1^2 - g2/4)
  const double r1 = (1 - k) * (1 - k) - 1.0 / 3.0;
  const double disc = p.g2 - 3 * r1 * r1;
  if (!(disc < 0)) throw std::domain_error("w_periods: expected a complex pair of roots");
  const C r2(-0.5 * r1, 0.5 * std::sqrt(-disc));
  const C r3 = std::conj(r2);
  const double c0 = r1 * r1 - p.g2 / 4.0;

  auto omega_f = [&](double s) {
    double y = r1 + s * s;
    return 1.0 / std::sqrt(y * y + r1 * y + c0);
  };
  const double omega = integrate_semiinf(omega_f, 1e-13).value;

  const C d = r2 - r1;
  auto branch = [&](double t, double ta, double tb) {
    return d / (2.0 * std::sqrt(ta * d) * std::sqrt(-tb * d) * std::sqrt(r1 + t * d - r3));
  };
  EndpointFn re = [&](double t, double ta, double tb) { return branch(t, ta, tb).real(); };
  EndpointFn im = [&](double t, double ta, double tb) { return branch(t, ta, tb).imag(); };
  C omega_p(integrate_finite(re, 0.0, 1.0, 1e-13).value, integrate_finite(im, 0.0, 1.0, 1e-13).value);

  p.periodK = omega;
  p.periodKprime = 2.0 * omega_p - omega;
  return p;
}

double w_period_direct(double k) {
  check_k(k, "w_period_direct");
  // (1-k)^2 - t(1-kt)^2 = (1 - t)(k^2 t^2 + (k^2 - 2k) t + (k-1)^2)
  EndpointFn f = [k](double t, double ta, double tb) {
    double quot = k * k * t * t + (k * k - 2 * k) * t + (k - 1) * (k - 1);
    return 1.0 / std::sqrt(4.0 * ta * tb * quot);
  };
  return integrate_finite(f, 0.0, 1.0, 1e-13).value;
}

double w_curve(double x, const WCurveParams& p) {
  if (!(x > 0.0 && x < 2.0 * p.periodK))
    throw std::domain_error("w_curve: x must lie in (0, 2K)");
  double P = wp(C(x, 0.0), p.g2, p.g3).real();
  double den = 1.0 + 3.0 * P;
  if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(P)))
    throw std::domain_error("w_curve: x is too close to a pole");
  return 3.0 * (1 - p.k) * (1 - p.k) / den;
}

double w_curve(double x, double k) { return w_curve(x, w_periods(k)); }

double w_nome(double k) {
  check_k(k, "w_nome");
  double p = 0.5 * (-1.0 + std::sqrt((3 * k - 1) / (k - 1)));
  double s = 1 + 4 * p + p * p;
  double al = 27 * p * std::pow(1 + p, 4) / (2 * s * s * s);
  return std::exp(-2 * pi / std::sqrt(3.0) * hyp2f1_13_23_1(1 - al) / hyp2f1_13_23_1(al));
}

WFourier w_fourier(double x, double k, int N) {
  check_k(k, "w_fourier");
  if (N < 1) throw std::invalid_argument("w_fourier: N must be positive");
  const double K = w_periods(k).periodK;
  if (!(x > 0.0 && x < 2.0 * K)) throw std::domain_error("w_fourier: x must lie in (0, 2K)");
  const double q = w_nome(k);
  std::vector<double> wt, lt;
  for (int n = 1; n <= N; ++n) {
    double qn = std::pow(q, n);
    double s = std::sin(pi * n * x / (2 * K));
    double s2 = s * s;
    double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    wt.push_back(-sgn * qn / (1 + sgn * qn + qn * qn) * s2);
    if (n % 2 == 1) lt.push_back((qn - qn * qn) / (1 + qn * qn * qn) * s2 / n);
  }
  WFourier r;
  r.w = 2 * pi / (k * K) * pairwise_sum(wt);
  r.logform = 8 * pairwise_sum(lt);
  double qN = std::pow(q, N + 1) / (1 - q);
  r.tail_bound = (2 * pi / (k * K)) * qN / (1 - q) + 8 * qN;
  return r;
}

}  // namespace mlab
