#include "mlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxLevel = 12;
constexpr int kMinLevel = 3;

void check_finite(double v, double x) {
  if (!std::isfinite(v))
    throw std::domain_error("integrand is not finite at x = " + std::to_string(x));
}

// One tanh-sinh node on [a, b] at abscissa t: x, the two complements and the weight.
struct Node {
  double x, from_a, to_b, w;
};

Node ts_node(double t, double a, double len) {
  double u = 0.5 * kPi * std::sinh(t);
  double e = std::exp(-2.0 * std::abs(u));
  double small = len * e / (1.0 + e);
  double big = len / (1.0 + e);
  double w = len * 0.25 * kPi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
  Node n;
  if (u >= 0) {
    n.from_a = big;
    n.to_b = small;
    n.x = a + len - small;
  } else {
    n.from_a = small;
    n.to_b = big;
    n.x = a + small;
  }
  n.w = w;
  return n;
}

struct LevelSum {
  double sum = 0.0, abs_sum = 0.0;
  std::int64_t evals = 0;
};

template <class NodeFn>
QuadResult refine(NodeFn node_at, double tmin, double tmax, double tol) {
  // Level 0 uses h = 1; each level halves h and adds the odd multiples.
  LevelSum acc;
  auto add = [&](double t) {
    double w, v;
    if (!node_at(t, w, v)) return;
    double term = w * v;
    acc.sum += term;
    acc.abs_sum += std::abs(term);
    ++acc.evals;
  };
  for (double t = 0.0; t <= tmax; t += 1.0) add(t);
  for (double t = -1.0; t >= tmin; t -= 1.0) add(t);
  double h = 1.0;
  double prev = acc.sum * h;
  double err = std::numeric_limits<double>::infinity();
  QuadResult best{prev, err, acc.evals};
  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    for (double t = h; t <= tmax; t += 2.0 * h) add(t);
    for (double t = -h; t >= tmin; t -= 2.0 * h) add(t);
    double cur = acc.sum * h;
    err = std::abs(cur - prev);
    best = {cur, err, acc.evals};
    double floor_err = 64.0 * kEps * acc.abs_sum * h;
    if (level >= kMinLevel && (err <= tol || err <= floor_err)) {
      return best;
    }
    prev = cur;
  }
  throw QuadratureError("quadrature did not converge: estimate " + std::to_string(best.value) +
                            ", error " + std::to_string(best.err_estimate),
                        best);
}

}  // namespace

QuadResult integrate_finite(const EndpointFn& f, double a, double b, double tol) {
  if (!(a < b)) throw std::invalid_argument("integrate_finite requires a < b");
  if (!(tol > 0)) throw std::invalid_argument("integrate_finite requires tol > 0");
  const double len = b - a;
  auto node_at = [&](double t, double& w, double& v) {
    Node n = ts_node(t, a, len);
    if (n.w == 0.0 || n.from_a <= 0.0 || n.to_b <= 0.0) return false;
    if (n.x <= a || n.x >= b) {
      // Rounded onto an endpoint; only the complement still carries information.
      n.x = n.from_a < n.to_b ? std::nextafter(a, b) : std::nextafter(b, a);
    }
    v = f(n.x, n.from_a, n.to_b);
    check_finite(v, n.x);
    w = n.w;
    return true;
  };
  return refine(node_at, -6.0, 6.0, tol);
}

QuadResult integrate_finite(const RealFn& f, double a, double b, double tol) {
  return integrate_finite(EndpointFn([&](double x, double, double) { return f(x); }), a, b, tol);
}

QuadResult integrate_pieces(const EndpointFn& f, const std::vector<double>& pts, double tol) {
  if (pts.size() < 2) throw std::invalid_argument("integrate_pieces needs two breakpoints");
  QuadResult total;
  double piece_tol = tol / static_cast<double>(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i] < pts[i + 1])) throw std::invalid_argument("breakpoints must increase");
    const double lo = pts[i] - pts.front(), hi = pts.back() - pts[i + 1];
    EndpointFn g = [&](double x, double da, double db) { return f(x, lo + da, hi + db); };
    QuadResult r = integrate_finite(g, pts[i], pts[i + 1], piece_tol);
    total.value += r.value;
    total.err_estimate += r.err_estimate;
    total.evaluations += r.evaluations;
  }
  return total;
}

QuadResult integrate_semiinf(const RealFn& f, double tol, double split) {
  if (!(split > 0)) throw std::invalid_argument("integrate_semiinf requires split > 0");
  QuadResult left = integrate_finite(f, 0.0, split, 0.5 * tol);
  // exp-sinh on [split, inf): u = split + exp(pi/2 sinh t).
  auto node_at = [&](double t, double& w, double& v) {
    double e = std::exp(0.5 * kPi * std::sinh(t));
    double u = split + e;
    if (e == 0.0 || !std::isfinite(u)) return false;
    w = 0.5 * kPi * std::cosh(t) * e;
    v = f(u);
    check_finite(v, u);
    return true;
  };
  QuadResult right = refine(node_at, -6.0, 3.8, 0.5 * tol);
  return {left.value + right.value, left.err_estimate + right.err_estimate,
          left.evaluations + right.evaluations};
}

namespace {

Complex horner(const std::vector<Complex>& c, Complex x, Complex* deriv) {
  Complex p = c[0], d = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    d = d * x + p;
    p = p * x + c[i];
  }
  if (deriv) *deriv = d;
  return p;
}

void quadratic(Complex b, Complex c, std::vector<Complex>& out) {
  Complex d = std::sqrt(b * b - 4.0 * c);
  Complex q = (std::real(std::conj(b) * d) >= 0) ? -0.5 * (b + d) : -0.5 * (b - d);
  if (q == Complex(0.0)) {
    out.push_back(0.0);
    out.push_back(0.0);
    return;
  }
  out.push_back(q);
  out.push_back(c / q);
}

Complex cbrt_c(Complex z) {
  if (z == Complex(0.0)) return 0.0;
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

void cubic(Complex a, Complex b, Complex c, std::vector<Complex>& out) {
  Complex shift = a / 3.0;
  Complex p = b - a * a / 3.0;
  Complex q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  Complex s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  Complex r1 = -q / 2.0 + s, r2 = -q / 2.0 - s;
  Complex u = cbrt_c(std::abs(r1) >= std::abs(r2) ? r1 : r2);
  const Complex w(-0.5, std::sqrt(3.0) / 2.0);
  for (int k = 0; k < 3; ++k) {
    Complex uk = u * std::pow(w, k);
    Complex vk = (uk == Complex(0.0)) ? Complex(0.0) : -p / (3.0 * uk);
    out.push_back(uk + vk - shift);
  }
}

void quartic(Complex a, Complex b, Complex c, Complex d, std::vector<Complex>& out) {
  Complex shift = a / 4.0;
  Complex p = b - 3.0 * a * a / 8.0;
  Complex q = c - a * b / 2.0 + a * a * a / 8.0;
  Complex r = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a * a * a * a / 256.0;
  std::vector<Complex> ys;
  std::vector<Complex> ms;
  cubic(p, (p * p - 4.0 * r) / 4.0, -q * q / 8.0, ms);
  Complex m = ms[0];
  for (const Complex& z : ms)
    if (std::abs(z) > std::abs(m)) m = z;
  if (std::abs(m) == 0.0) {
    std::vector<Complex> zs;
    quadratic(p, r, zs);
    for (const Complex& z : zs) {
      Complex y = std::sqrt(z);
      ys.push_back(y);
      ys.push_back(-y);
    }
  } else {
    Complex s = std::sqrt(2.0 * m);
    Complex t = q / (2.0 * s);
    quadratic(-s, p / 2.0 + m + t, ys);
    quadratic(s, p / 2.0 + m - t, ys);
  }
  for (const Complex& y : ys) out.push_back(y - shift);
}

}  // namespace

std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs) {
  if (coeffs.size() < 2 || coeffs.size() > 5)
    throw std::invalid_argument("poly_roots supports degree 1 to 4");
  if (coeffs[0] == Complex(0.0))
    throw std::invalid_argument("poly_roots: leading coefficient c[0] is zero");
  std::vector<Complex> c(coeffs.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeffs[i] / coeffs[0];
  std::vector<Complex> roots;
  switch (c.size() - 1) {
    case 1: roots.push_back(-c[1]); break;
    case 2: quadratic(c[1], c[2], roots); break;
    case 3: cubic(c[1], c[2], c[3], roots); break;
    default: quartic(c[1], c[2], c[3], c[4], roots); break;
  }
  for (Complex& z : roots) {
    Complex d;
    Complex pz = horner(c, z, &d);
    for (int it = 0; it < 4 && pz != Complex(0.0) && d != Complex(0.0); ++it) {
      Complex nz = z - pz / d;
      Complex nd;
      Complex np = horner(c, nz, &nd);
      if (!(std::abs(np) < std::abs(pz))) break;
      z = nz;
      pz = np;
      d = nd;
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return roots;
}

double central_diff(const RealFn& f, double x, double h) {
  if (!(h > 0)) throw std::invalid_argument("central_diff requires h > 0");
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t m = n / 2;
  return pairwise_sum(v, m) + pairwise_sum(v + m, n - m);
}

}  // namespace mlab
