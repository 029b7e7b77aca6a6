#pragma once

#include <functional>
#include <string>

#include "mlab/numerics.hpp"

namespace mlab {

struct LatticeSumSpec {
  double b = 1.0;
  double c = 1.0;
};

// Parses "p" or "p/q" into a positive double.
double parse_positive_rational(const std::string& s);

enum class CubeKernel { Auto, Scalar, Avx2 };

struct CubeOptions {
  CubeKernel kernel = CubeKernel::Auto;
  unsigned threads = 0;  // 0: hardware concurrency
  // Called with the fraction of rows completed.
  std::function<void(double)> progress;
};

constexpr int kCubeMaxN = 60;

bool avx2_available();
// (b+1)^2 (c+1)^2 sum over max|n_i| <= N of (-1)^{n1+n2+n3+n4} / Q^2,
// Q = (6n1+1)^2 + b(6n2+1)^2 + c(6n3+1)^2 + bc(6n4+1)^2.
double F_cube(const LatticeSumSpec& s, int N, const CubeOptions& opt = {});
// Same sum accumulated term by term in lexicographic index order.
double F_cube_sequential(const LatticeSumSpec& s, int N);

double F_integral(const LatticeSumSpec& s);
QuadResult F_integral_quad(const LatticeSumSpec& s);

// L(E, 2) for conductors 20, 24, 27, 36 from the eta-product Mellin integral.
double L_elliptic(int conductor);
QuadResult L_elliptic_quad(int conductor);

enum class HMethod { Definition, Reduced, Elementary };
enum class GMethod { Definition, RealReduced, ElementaryX1 };
enum class SMethod { Definition, Reduced };

double H_eval(double x, HMethod m);
double G_eval(double x, GMethod m);
double S_eval(double x, SMethod m);
// Integrand of the reduced S integral as a function of q (for reality checks).
double S_reduced_integrand(double q, double x);

double J_y(double y);
// (1/2pi) int dt / sqrt(t(1-t)(4 + (4-y)yt + y^2 t^2)) and its 2F1 closed form.
double T5_integral(double y);
double T5_hyper(double y);
// Both sides of the cubic transformation at p in (0, 1).
double T5a_lhs(double p);
double T5a_rhs(double p);

struct F1F2 {
  double F1 = 0.0;
  double F2 = 0.0;
};
F1F2 F1_F2(double lambda);
double lemk1_rhs(double lambda);
double lemk2_rhs(double lambda);

double gn_coefficient(int n);
double gn_series(double z, int nmax);
double gn_integral(double z);

double elementary_E20();
double cond20_closed_form(double k);
// Right side parametrized directly by p = (-1 + sqrt((3k-1)/(k-1)))/2 in (0, 1].
double cond20_closed_form_p(double p);
double cond20_param(double k);

// alpha(q) = 1 - phi^4(-q)/phi^4(q).
double modular_alpha(double q);

}  // namespace mlab
