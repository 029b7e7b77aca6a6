#include "mlab/lvalues.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fcube_kernels.hpp"
#include "mlab/hypergeo.hpp"
#include "mlab/mahler.hpp"
#include "mlab/numerics.hpp"
#include "mlab/qseries.hpp"

namespace mlab {

using std::numbers::pi;

double parse_positive_rational(const std::string& s) {
  std::size_t slash = s.find('/');
  double v;
  try {
    std::size_t pos = 0;
    if (slash == std::string::npos) {
      v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("trailing characters");
    } else {
      std::string a = s.substr(0, slash), b = s.substr(slash + 1);
      std::size_t pa = 0, pb = 0;
      double num = std::stod(a, &pa), den = std::stod(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing characters");
      v = num / den;
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("not a rational number: '" + s + "'");
  }
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("expected a positive rational, got '" + s + "'");
  return v;
}

// ---------------------------------------------------------------- F_cube

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

void check_spec(const LatticeSumSpec& s) {
  if (!(s.b > 0.0 && s.c > 0.0)) throw std::domain_error("lattice sum needs b, c > 0");
}

struct CubeRows {
  std::vector<double> A, sA, B, sB;
};

CubeRows cube_rows(const LatticeSumSpec& s, int N) {
  CubeRows r;
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n2 = -N; n2 <= N; ++n2) {
      double u = 6.0 * n1 + 1, v = 6.0 * n2 + 1;
      r.A.push_back(u * u + s.b * v * v);
      r.sA.push_back(((n1 + n2) % 2 == 0) ? 1.0 : -1.0);
      r.B.push_back(s.c * u * u + s.b * s.c * v * v);
      r.sB.push_back(r.sA.back());
    }
  while (r.B.size() % 4 != 0) {
    r.B.push_back(1.0);
    r.sB.push_back(0.0);
  }
  return r;
}

}  // namespace

double F_cube(const LatticeSumSpec& s, int N, const CubeOptions& opt) {
  check_spec(s);
  if (N < 0) throw std::domain_error("F_cube: N must be >= 0");
  if (N > kCubeMaxN) throw std::domain_error("F_cube: N is capped at " + std::to_string(kCubeMaxN));
  auto kern = detail::cube_row_scalar;
  if (opt.kernel == CubeKernel::Avx2 || (opt.kernel == CubeKernel::Auto && avx2_available())) {
    if (!avx2_available()) throw std::runtime_error("F_cube: AVX2 kernel requested but unsupported");
    kern = detail::cube_row_avx2;
  }
  CubeRows r = cube_rows(s, N);
  const std::size_t rows = r.A.size();
  // (b+1)(c+1) formed exactly like the n = 0 denominator, so that N = 0 gives 1
  const double P = r.A[rows / 2] + r.B[rows / 2];
  std::vector<double> rowval(rows, 0.0);
  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, static_cast<unsigned>(rows));
  std::atomic<std::size_t> next{0}, done{0};
  constexpr std::size_t kChunk = 64;
  auto work = [&](bool report) {
    for (;;) {
      std::size_t i0 = next.fetch_add(kChunk);
      if (i0 >= rows) break;
      std::size_t i1 = std::min(rows, i0 + kChunk);
      for (std::size_t i = i0; i < i1; ++i)
        rowval[i] = r.sA[i] * kern(r.A[i], P, r.B.data(), r.sB.data(), r.B.size());
      std::size_t d = done.fetch_add(i1 - i0) + (i1 - i0);
      if (report && opt.progress) opt.progress(static_cast<double>(d) / rows);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(work, false);
  work(true);
  for (auto& th : pool) th.join();
  if (opt.progress) opt.progress(1.0);
  return pairwise_sum(rowval);
}

double F_cube_sequential(const LatticeSumSpec& s, int N) {
  check_spec(s);
  if (N < 0 || N > kCubeMaxN) throw std::domain_error("F_cube_sequential: N out of range");
  const double P = (1.0 + s.b) + (s.c + s.b * s.c);
  double acc = 0.0;
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n2 = -N; n2 <= N; ++n2)
      for (int n3 = -N; n3 <= N; ++n3)
        for (int n4 = -N; n4 <= N; ++n4) {
          double a = 6.0 * n1 + 1, b = 6.0 * n2 + 1, c = 6.0 * n3 + 1, d = 6.0 * n4 + 1;
          double Q = (a * a + s.b * b * b) + (s.c * c * c + s.b * s.c * d * d);
          double sg = ((n1 + n2 + n3 + n4) % 2 == 0) ? 1.0 : -1.0;
          double r = P / Q;
          acc += sg * (r * r);
        }
  return acc;
}

// ------------------------------------------------------ Mellin integrals

namespace {

constexpr double kTol = 1e-12;
// exp(-50) cutoffs for the cancelling integrands below
constexpr double kGCut = 2 * pi * pi / (9 * 50);
constexpr double kSCut = 2 * pi * pi / (5 * 50);

QuadResult semiinf_quad(const RealFn& f) {
  try {
    return integrate_semiinf(f, kTol);
  } catch (const QuadratureError& e) {
    if (e.best().err_estimate < 1e-9) return e.best();
    throw;
  }
}

double semiinf(const RealFn& f) { return semiinf_quad(f).value; }

double finite(const EndpointFn& f, double a, double b) {
  try {
    return integrate_finite(f, a, b, kTol).value;
  } catch (const QuadratureError& e) {
    if (e.best().err_estimate < 1e-9) return e.best().value;
    throw;
  }
}

using EQ = EtaFactor;

// q^{1/8} psi(q) = eta^2(q^2)/eta(q) at q = e^{-v}
double log_P(double v) { return log_eta_quotient({{2, 2}, {-1, 1}}, v); }
double log_c(double v) { return std::log(3.0) + log_eta_quotient({{3, 3}, {-1, 1}}, v); }
double log_b(double v) { return log_eta_quotient({{3, 1}, {-1, 3}}, v); }
double log_phi(double v) { return log_eta_quotient({{5, 2}, {-2, 1}, {-2, 4}}, v); }

// int_{u0}^inf; used where the integrand is a difference of terms that
// cancel to O(exp(-c/u)) as u -> 0, below u0 it is negligible.
double semiinf_from(const RealFn& f, double u0) {
  return semiinf([&](double s) { return f(u0 + s); });
}

double pieces(const EndpointFn& f, const std::vector<double>& pts) {
  try {
    return integrate_pieces(f, pts, kTol).value;
  } catch (const QuadratureError& e) {
    if (e.best().err_estimate < 1e-9) return e.best().value;
    throw;
  }
}

}  // namespace

double F_integral(const LatticeSumSpec& s) { return F_integral_quad(s).value; }

QuadResult F_integral_quad(const LatticeSumSpec& s) {
  check_spec(s);
  const double b = s.b, c = s.c;
  auto f = [=](double u) {
    return u * std::exp(log_eta_quotient({{1, 24}, {1, 24 * b}, {1, 24 * c}, {1, 24 * b * c}}, u));
  };
  const double scale = (b + 1) * (b + 1) * (c + 1) * (c + 1);
  QuadResult r = semiinf_quad(f);
  r.value *= scale;
  r.err_estimate *= scale;
  return r;
}

double L_elliptic(int conductor) { return L_elliptic_quad(conductor).value; }

QuadResult L_elliptic_quad(int conductor) {
  RealFn f;
  switch (conductor) {
    case 20: f = [](double u) { return u * std::exp(log_eta_quotient({{2, 2}, {2, 10}}, u)); }; break;
    case 24:
      f = [](double u) {
        return u * std::exp(log_eta_quotient({{1, 2}, {1, 4}, {1, 6}, {1, 12}}, u));
      };
      break;
    case 27: f = [](double u) { return u * std::exp(log_eta_quotient({{2, 3}, {2, 9}}, u)); }; break;
    case 36: f = [](double u) { return u * std::exp(log_eta_quotient({{4, 6}}, u)); }; break;
    default:
      throw std::domain_error("L_elliptic: unsupported conductor " + std::to_string(conductor) +
                              " (expected 20, 24, 27 or 36)");
  }
  return semiinf_quad(f);
}

namespace {

void check_x(double x, const char* who) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error(std::string(who) + ": x must be > 0");
}

// 1 - a^{1/3} and 1 - (1 - a)^{1/3} without cancellation
double one_minus_cbrt(double a, double one_minus_a) {
  return (a > 0.5) ? -std::expm1(std::log1p(-one_minus_a) / 3.0) : 1.0 - std::cbrt(a);
}

double H_elementary(double x) {
  const bool one = std::abs(x - 1.0) < 1e-15;
  const bool third = std::abs(x - 1.0 / 3.0) < 1e-15;
  if (!one && !third) throw std::domain_error("H_eval: elementary route exists only for x = 1 and x = 1/3");
  EndpointFn f = [one](double, double a, double om) {
    double ca = std::cbrt(a), com = std::cbrt(om);
    double u = one_minus_cbrt(om, a);  // 1 - (1-a)^{1/3}
    double v = one_minus_cbrt(a, om);  // 1 - a^{1/3}
    double lg = std::log(u / ca);
    double front = one ? ca * v : com * u;
    return front / (a * om) * lg;
  };
  double I = pieces(f, {0.0, 0.5, 1.0});
  return 2 * pi / (3 * std::sqrt(3.0) * x) * I;
}

}  // namespace

double H_eval(double x, HMethod m) {
  check_x(x, "H_eval");
  switch (m) {
    case HMethod::Definition:
      return -semiinf([x](double u) { return u * std::exp(log_b(x * u) + log_c(u)); }) / 3.0;
    case HMethod::Reduced: {
      auto f = [x](double u) {
        double lg = std::log(3.0) + log_c(9 * x * u) - log_c(3 * x * u);
        return std::exp(log_b(u) + log_c(3 * u)) * lg;
      };
      return 2 * pi / (std::sqrt(3.0) * x) * semiinf(f);
    }
    case HMethod::Elementary: return H_elementary(x);
  }
  throw std::logic_error("H_eval: bad method");
}

namespace {

double G1_elementary() {
  EndpointFn f = [](double, double p, double tb) {
    double one_m_2p = 2 * tb;
    double lg = 3 * std::log(p) + std::log(2 - p) - std::log(one_m_2p);
    return std::sqrt(one_m_2p * (2 - p)) * lg / ((1 - p * p) * std::sqrt(p));
  };
  return pi / 12 * pieces(f, {0.0, 0.25, 0.5});
}

}  // namespace

double G_eval(double x, GMethod m) {
  check_x(x, "G_eval");
  switch (m) {
    case GMethod::Definition: {
      auto f = [x](double u) {
        double l = log_eta_quotient({{2, 2}, {-1, 1}, {2, 6}, {-1, 3}, {2, x}, {-1, 2 * x},
                                     {2, 3 * x}, {-1, 6 * x}},
                                    u);
        return u * std::exp(l);
      };
      return -semiinf(f);
    }
    case GMethod::RealReduced: {
      auto f = [x](double u) {
        double A = std::exp(log_P(u)), B = std::exp(log_P(9 * u));
        double lg = std::log(4.0) + 4 * log_eta_quotient({{2, 12 * x}, {-3, 6 * x}, {1, 3 * x}}, u);
        return (A - B) * (A - 3 * B) * (A * A - 3 * B * B) * lg;
      };
      // A - 3B = O(exp(-2 pi^2 / (9u))) as u -> 0
      return pi / (2 * std::sqrt(3.0) * x) * semiinf_from(f, kGCut);
    }
    case GMethod::ElementaryX1:
      if (x != 1.0) throw std::domain_error("G_eval: elementary route exists only for x = 1");
      return G1_elementary();
  }
  throw std::logic_error("G_eval: bad method");
}

double S_eval(double x, SMethod m) {
  check_x(x, "S_eval");
  switch (m) {
    case SMethod::Definition: {
      auto f = [x](double u) {
        double p1 = std::exp(2 * log_P(u)), p5 = std::exp(2 * log_P(5 * u));
        return u * std::exp(2 * log_P(x * u)) * (p1 - 5 * p5);
      };
      // P(u)^2 - 5 P(5u)^2 = O(exp(-2 pi^2 / (5u))) as u -> 0
      return -semiinf_from(f, kSCut);
    }
    case SMethod::Reduced: {
      auto f = [x](double u) {
        double v = x * u;
        double w = 4 * log_eta_quotient({{1, 1}, {1, 4}, {-1, 2}}, v);
        double lg = std::log(5.0) + 2 * (log_phi(5 * u) - log_phi(u));
        return std::exp(w) * lg;
      };
      return -pi * semiinf(f);
    }
  }
  throw std::logic_error("S_eval: bad method");
}

double S_reduced_integrand(double q, double x) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("S_reduced_integrand: need 0 < q < 1");
  std::complex<double> qx = std::pow(q, x);
  std::complex<double> ps = eval_numeric(psi(), -qx);
  std::complex<double> val = std::pow(qx, 0.5) * std::pow(ps, 4) *
                             std::log(5.0 * std::pow(eval_numeric(phi(), std::pow(q, 5)), 2) /
                                      std::pow(eval_numeric(phi(), q), 2));
  if (std::abs(val.imag()) > 1e-14 * std::max(1.0, std::abs(val)))
    throw std::runtime_error("S_reduced_integrand: unexpected imaginary part");
  return val.real();
}

// ------------------------------------------------------------- J and T5

namespace {

void check_y(double y, bool closed_top) {
  bool ok = y >= 2.0 && (closed_top ? y <= 8.0 : y < 8.0);
  if (!ok) throw std::domain_error(closed_top ? "need 2 <= y <= 8" : "need 2 <= y < 8");
}

// t0 = (y - 4)/(2y); 4 + (4-y)yt + y^2t^2 = (y(t - t0))^2 + (16 - (y-4)^2)/4.
// g receives t, t - t0 and the square root of that quadratic.
double t_integral(double y, const std::function<double(double t, double d, double root)>& g) {
  const double t0 = (y - 4) / (2 * y);
  const double r0 = std::sqrt(std::max(0.0, (16 - (y - 4) * (y - 4)) / 4));
  if (t0 > 0.0) {
    EndpointFn left = [&](double t, double ta, double tb) {
      double d = -tb;
      return g(t, d, std::hypot(y * d, r0)) / std::sqrt(ta * (1 - t));
    };
    EndpointFn right = [&](double t, double ta, double tb) {
      double d = ta;
      return g(t, d, std::hypot(y * d, r0)) / std::sqrt(t * tb);
    };
    return finite(left, 0.0, t0) + finite(right, t0, 1.0);
  }
  EndpointFn f = [&](double t, double ta, double tb) {
    double d = t - t0;
    return g(t, d, std::hypot(y * d, r0)) / std::sqrt(ta * tb);
  };
  return finite(f, 0.0, 1.0);
}

}  // namespace

double J_y(double y) {
  check_y(y, true);
  auto g = [y](double t, double d, double Q) {
    double num = 3 * y * d + (y - 8) / 2;  // 2 - y + 3yt
    return num * std::log1p(y * t) / Q;
  };
  return t_integral(y, g) / (2 * pi);
}

double T5_integral(double y) {
  check_y(y, false);
  auto g = [](double, double, double Q) { return 1.0 / Q; };
  return t_integral(y, g) / (2 * pi);
}

double T5_hyper(double y) {
  check_y(y, false);
  return hyp2f1_13_23_1(27 * y * y / std::pow(y + 4, 3)) / (y + 4);
}

double T5a_lhs(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("T5a: need 0 < p < 1");
  double s = 1 + p + p * p;
  return hyp2f1_13_23_1(27 * p * p * (1 + p) * (1 + p) / (4 * s * s * s)) / s;
}

double T5a_rhs(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("T5a: need 0 < p < 1");
  return pfq({0.5, 0.5}, {1.0}, p * p * p * (2 + p) / (1 + 2 * p)) / std::sqrt(1 + 2 * p);
}

// ------------------------------------------------------------- F1, F2

F1F2 F1_F2(double lambda) {
  if (!(lambda >= 1.0)) throw std::domain_error("F1_F2: need lambda >= 1");
  const double L = lambda, top = 1.0 / L;
  auto w = [L, top](double p, double tb) {
    double one_m_lp = L * tb;
    double one_m_p = (1.0 - top) + tb;
    return std::sqrt(one_m_lp * (L - p)) / (one_m_p * (1 + p) * std::sqrt(p));
  };
  EndpointFn f1 = [&](double, double p, double tb) { return w(p, tb) * -std::log(p); };
  EndpointFn f2 = [&](double, double p, double tb) {
    return (L == 1.0) ? 0.0 : w(p, tb) * std::log((L - p) / (L * tb));
  };
  const std::vector<double> pts = {0.0, 0.5 * top, top};
  return {pieces(f1, pts), pieces(f2, pts)};
}

double lemk1_rhs(double lambda) {
  return pi * pfq({0.5, 0.5, 0.5}, {1.5, 1.0}, 1.0 / (lambda * lambda));
}

double lemk2_rhs(double lambda) {
  double z = 1.0 / (lambda * lambda);
  return pi / 2 * std::log(4 * lambda) + pi / 2 * pfq({0.5, 0.5, 0.5}, {1.5, 1.0}, z) -
         pi / (16 * lambda * lambda) * pfq({1.5, 1.5, 1, 1}, {2, 2, 2}, z);
}

double gn_coefficient(int n) {
  if (n < 0) throw std::domain_error("gn_coefficient: n must be >= 0");
  return std::exp(std::lgamma(n + 1.5) + std::lgamma(n + 0.5) - 2 * std::lgamma(n + 1.0)) / (2 * n + 1);
}

double gn_series(double z, int nmax) {
  double s = 0.0, zn = 1.0;
  for (int n = 0; n <= nmax; ++n, zn *= z) s += gn_coefficient(n) * zn;
  return s;
}

double gn_integral(double z) {
  if (!(z >= 0.0 && z < 1.0)) throw std::domain_error("gn_integral: need 0 <= z < 1");
  EndpointFn f = [z](double t, double ta, double tb) {
    return std::sqrt(tb) / ((1 - z * t * t) * std::sqrt(ta * (1 - z * t)));
  };
  return pieces(f, {0.0, 0.5, 1.0});
}

// ------------------------------------------------------------ conductor 20

double elementary_E20() {
  EndpointFn f = [](double t, double ta, double tb) {
    return (1 - 6 * t) * std::log1p(4 * t) / std::sqrt(ta * tb * (1 + 4 * t * t));
  };
  return -pi / 20 * pieces(f, {0.0, 1.0 / 6, 1.0});
}

double cond20_param(double k) {
  if (!(k >= 4.0 / 3.0)) throw std::domain_error("cond20_param: need k >= 4/3");
  return 0.5 * (-1 + std::sqrt((3 * k - 1) / (k - 1)));
}

double cond20_closed_form_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("cond20_param: need 0 < p <= 1");
  return 2 * g_value(2 * (1 + p) * (1 + p) / p) - g_value(4 * (1 + p) / (p * p));
}

double cond20_closed_form(double k) { return cond20_closed_form_p(cond20_param(k)); }

double modular_alpha(double q) {
  double r = (eval_numeric(phineg(), q) / eval_numeric(phi(), q)).real();
  return 1 - r * r * r * r;
}

}  // namespace mlab
