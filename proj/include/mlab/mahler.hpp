#pragma once

#include <string>

#include "mlab/numerics.hpp"

namespace mlab {

// m: alpha + X + 1/X + Y + 1/Y
// g: (1 + X)(1 + Y)(X + Y) - alpha X Y
// n: X^3 + Y^3 + 1 - alpha X Y
enum class Family { M, G, N };
enum class Route { Auto, Direct, Hyper, JIntegral };

Family parse_family(const std::string& s);
Route parse_route(const std::string& s);
std::string family_name(Family f);

struct MahlerQuery {
  Family family = Family::M;
  double alpha = 0.0;
  Route route = Route::Auto;
};

// Jensen reduction in X, quadrature over Y on the unit circle.
double mahler_direct(Family f, double alpha);
QuadResult mahler_direct_quad(Family f, double alpha);
// Integral of log|1 + Y| over the unit circle (the leading-coefficient
// term for family g); zero analytically.
double g_leading_term();

double mahler_hyper(Family f, double alpha);
// Accepts 0 < z <= 1/27; z = 1/27 sums the 4F3 at its unit-circle boundary.
double f_aux(double z);
// g(alpha) = f(alpha^2/(alpha+4)^3)/3 + 4 f(alpha/(alpha-2)^3)/3, alpha >= 8.
double g_f_decomposition(double alpha);
double g_via_J(double y);

// Route policy: m uses the hypergeometric forms; g uses J on [2, 8], the f
// decomposition once both 4F3 arguments are <= 0.95 (alpha >= 11.9605), else
// direct;
// n uses the hypergeometric form for alpha >= 3.05, else direct.
double mahler(const MahlerQuery& q);
double m_value(double alpha);
double g_value(double alpha);
double n_value(double alpha);

}  // namespace mlab
