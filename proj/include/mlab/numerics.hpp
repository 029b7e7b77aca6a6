#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlab {

using Real = double;
using Complex = std::complex<double>;

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::int64_t evaluations = 0;
};

// Thrown when the refinement budget is exhausted; carries the best estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadResult& best() const { return best_; }

 private:
  QuadResult best_;
};

using RealFn = std::function<double(double)>;

// Integrand that also receives the exact distances x - a and b - x.
// Use it when the integrand is singular like (b - x)^(-1/2).
using EndpointFn = std::function<double(double x, double from_a, double to_b)>;

QuadResult integrate_finite(const RealFn& f, double a, double b, double tol = 1e-12);
QuadResult integrate_finite(const EndpointFn& f, double a, double b, double tol = 1e-12);

// Sum of integrate_finite over consecutive breakpoints (strictly increasing).
// The integrand receives distances to the outer endpoints pts.front(), pts.back().
QuadResult integrate_pieces(const EndpointFn& f, const std::vector<double>& pts,
                            double tol = 1e-12);

// Integral over (0, inf), split at `split`: tanh-sinh on (0, split],
// exp-sinh on [split, inf).
QuadResult integrate_semiinf(const RealFn& f, double tol = 1e-12, double split = 1.0);

// Roots of a polynomial given highest degree first, degree 1..4.
// Closed forms polished by Newton steps, sorted by (re, im).
std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs);

// Richardson-extrapolated central difference, O(h^4).
double central_diff(const RealFn& f, double x, double h);

// Pairwise (cascade) summation; deterministic for a fixed input order.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace mlab
