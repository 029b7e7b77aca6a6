#include "mlab/mahler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mlab/hypergeo.hpp"
#include "mlab/lvalues.hpp"
#include "mlab/numerics.hpp"

namespace mlab {

using std::numbers::pi;
using C = std::complex<double>;

Family parse_family(const std::string& s) {
  if (s == "m" || s == "M") return Family::M;
  if (s == "g" || s == "G") return Family::G;
  if (s == "n" || s == "N") return Family::N;
  throw std::invalid_argument("unknown family '" + s + "' (expected m, g or n)");
}

Route parse_route(const std::string& s) {
  if (s == "auto") return Route::Auto;
  if (s == "direct") return Route::Direct;
  if (s == "hyper") return Route::Hyper;
  if (s == "j" || s == "j_integral") return Route::JIntegral;
  throw std::invalid_argument("unknown route '" + s + "'");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::M: return "m";
    case Family::G: return "g";
    case Family::N: return "n";
  }
  return "?";
}

namespace {

constexpr double kUnitTol = 1e-14;

// Y = exp(2 pi i s) for s in [0, 1/2]; 1 + Y from the distance to 1/2.
struct CirclePoint {
  C Y;
  C onePlusY;
};

CirclePoint circle_point(double s, double to_half) {
  double th = 2 * pi * s;
  C Y(std::cos(th), std::sin(th));
  // 1 + e^{i th} = 1 - e^{-i phi}, phi = 2 pi (1/2 - s)
  double ph = 2 * pi * to_half;
  double sh = std::sin(0.5 * ph);
  C opy(2 * sh * sh, std::sin(ph));
  return {Y, opy};
}

std::vector<C> coefficients(Family f, double alpha, const CirclePoint& p) {
  switch (f) {
    case Family::M: {
      double b = alpha + 2 * p.Y.real();
      return {1.0, b, 1.0};
    }
    case Family::G:
      return {1.0, p.onePlusY - alpha * p.Y / p.onePlusY, p.Y};
    case Family::N:
      return {1.0, 0.0, -alpha * p.Y, p.Y * p.Y * p.Y + 1.0};
  }
  return {};
}

std::vector<C> roots_at(Family f, double alpha, double s, double to_half) {
  auto c = coefficients(f, alpha, circle_point(s, to_half));
  for (const auto& x : c)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw std::domain_error("mahler_direct: coefficient overflow");
  // monic quadratic with a huge middle coefficient: roots -b and -c/b
  if (c.size() == 3 && std::abs(c[1]) > 1e100) return {-c[1], -c[2] / c[1]};
  return poly_roots(c);
}

double logplus_sum(const std::vector<C>& r) {
  double acc = 0.0;
  for (const auto& x : r) {
    double l = std::log(std::abs(x));
    if (l > kUnitTol) acc += l;
  }
  return acc;
}

int outside_count(const std::vector<C>& r) {
  int n = 0;
  for (const auto& x : r)
    if (std::log(std::abs(x)) > kUnitTol) ++n;
  return n;
}

double jensen_integrand(Family f, double alpha, double s, double to_half) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      double ds = attempt * 1e-13;
      return logplus_sum(roots_at(f, alpha, s + ds, to_half - ds));
    } catch (const std::domain_error&) {
    }
  }
  throw std::runtime_error("mahler_direct: root finder failed persistently near s = " +
                           std::to_string(s));
}

int count_at(Family f, double alpha, double s) {
  return outside_count(roots_at(f, alpha, s, 0.5 - s));
}

// Points in (0, 1/2) where a root crosses the unit circle.
std::vector<double> crossings(Family f, double alpha) {
  constexpr int kGrid = 1024;
  std::vector<double> grid;
  grid.push_back(1e-12);
  for (int i = 1; i < kGrid; ++i) grid.push_back(0.5 * i / kGrid);
  grid.push_back(0.5 - 1e-12);
  std::vector<int> cnt;
  for (double s : grid) cnt.push_back(count_at(f, alpha, s));
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (cnt[i] == cnt[i + 1]) continue;
    double a = grid[i], b = grid[i + 1];
    int ca = cnt[i];
    for (int it = 0; it < 60 && b - a > 1e-16; ++it) {
      double m = 0.5 * (a + b);
      if (count_at(f, alpha, m) == ca) a = m;
      else b = m;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

}  // namespace

double mahler_direct(Family f, double alpha) { return mahler_direct_quad(f, alpha).value; }

QuadResult mahler_direct_quad(Family f, double alpha) {
  if (!std::isfinite(alpha)) throw std::domain_error("mahler_direct: alpha must be finite");
  std::vector<double> pts = {0.0};
  for (double s : crossings(f, alpha))
    if (s - pts.back() > 1e-13 && 0.5 - s > 1e-13) pts.push_back(s);
  pts.push_back(0.5);
  std::vector<double> parts;
  QuadResult total;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double hi = pts[i + 1];
    EndpointFn g = [&, hi](double s, double, double to_b) {
      return jensen_integrand(f, alpha, s, (0.5 - hi) + to_b);
    };
    QuadResult r;
    try {
      r = integrate_finite(g, pts[i], hi, 1e-12);
    } catch (const QuadratureError& e) {
      r = e.best();
      if (r.err_estimate > 1e-8) throw;
    }
    parts.push_back(r.value);
    total.err_estimate += 2.0 * r.err_estimate;
    total.evaluations += r.evaluations;
  }
  total.value = 2.0 * pairwise_sum(parts);
  return total;
}

double g_leading_term() {
  EndpointFn fn = [](double s, double, double to_b) {
    return std::log(std::abs(circle_point(s, to_b).onePlusY));
  };
  return 2.0 * integrate_finite(fn, 0.0, 0.5, 1e-13).value;
}

double f_aux(double z) {
  if (!(z > 0.0 && z <= 1.0 / 27.0 * (1 + 1e-15)))
    throw std::domain_error("f_aux: need 0 < z <= 1/27, got " + std::to_string(z));
  double w = std::min(27.0 * z, 1.0);
  return -std::log(z) / 3.0 - 2.0 * z * pfq({4.0 / 3, 5.0 / 3, 1, 1}, {2, 2, 2}, w);
}

double g_f_decomposition(double alpha) {
  if (!(alpha >= 8.0))
    throw std::domain_error("g_f_decomposition: need alpha >= 8 (use g_via_J or mahler_direct)");
  double z1 = alpha * alpha / std::pow(alpha + 4, 3);
  double z2 = alpha / std::pow(alpha - 2, 3);
  return f_aux(z1) / 3.0 + 4.0 * f_aux(std::min(z2, 1.0 / 27)) / 3.0;
}

double g_via_J(double y) {
  if (!(y >= 2.0 && y <= 8.0)) throw std::domain_error("g_via_J: need 2 <= y <= 8");
  return J_y(y);
}

namespace {

bool g_hyper_ok(double alpha) {
  return alpha > 8.0 && 27 * alpha * alpha / std::pow(alpha + 4, 3) <= 0.95 &&
         27 * alpha / std::pow(alpha - 2, 3) <= 0.95;
}

}  // namespace

double mahler_hyper(Family f, double alpha) {
  switch (f) {
    case Family::M:
      if (alpha >= 0.0 && alpha <= 4.0)
        return alpha / 4.0 * pfq({0.5, 0.5, 0.5}, {1.0, 1.5}, alpha * alpha / 16.0);
      if (std::abs(alpha) >= 4.0)
        return std::log(std::abs(alpha)) -
               2.0 / (alpha * alpha) * pfq({1.5, 1.5, 1, 1}, {2, 2, 2}, 16.0 / (alpha * alpha));
      throw std::domain_error("mahler_hyper(m): need alpha in [0, 4] or |alpha| >= 4; use mahler_direct");
    case Family::N:
      if (alpha >= 3.05) return f_aux(1.0 / (alpha * alpha * alpha));
      throw std::domain_error("mahler_hyper(n): need alpha >= 3.05; use mahler_direct");
    case Family::G:
      if (g_hyper_ok(alpha)) return g_f_decomposition(alpha);
      throw std::domain_error(
          "mahler_hyper(g): both 4F3 arguments must be <= 0.95 (alpha >= 11.9605); "
          "use g_via_J on [2, 8] or mahler_direct");
  }
  throw std::logic_error("mahler_hyper: bad family");
}

double m_value(double alpha) {
  if (alpha >= 0.0 || std::abs(alpha) >= 4.0) return mahler_hyper(Family::M, alpha);
  return mahler_direct(Family::M, alpha);
}

double g_value(double alpha) {
  if (alpha >= 2.0 && alpha <= 8.0) return g_via_J(alpha);
  if (g_hyper_ok(alpha)) return g_f_decomposition(alpha);
  return mahler_direct(Family::G, alpha);
}

double n_value(double alpha) {
  if (alpha >= 3.05) return mahler_hyper(Family::N, alpha);
  return mahler_direct(Family::N, alpha);
}

double mahler(const MahlerQuery& q) {
  switch (q.route) {
    case Route::Direct: return mahler_direct(q.family, q.alpha);
    case Route::Hyper: return mahler_hyper(q.family, q.alpha);
    case Route::JIntegral:
      if (q.family != Family::G) throw std::domain_error("the J-integral route exists only for family g");
      return g_via_J(q.alpha);
    case Route::Auto: break;
  }
  switch (q.family) {
    case Family::M: return m_value(q.alpha);
    case Family::G: return g_value(q.alpha);
    case Family::N: return n_value(q.alpha);
  }
  throw std::logic_error("mahler: bad family");
}

}  // namespace mlab
