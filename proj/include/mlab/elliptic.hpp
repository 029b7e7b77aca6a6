#pragma once

#include <complex>

namespace mlab {

// Parameter convention: alpha = k^2.
struct ModulusParams {
  double alpha = 0.0;
  double bigK = 0.0;
  double bigKprime = 0.0;
  double nome = 0.0;
};

struct JacobiValues {
  double sn = 0.0, cn = 1.0, dn = 1.0;
};

struct WCurveParams {
  double k = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double periodK = 0.0;
  std::complex<double> periodKprime;
};

struct WFourier {
  double w = 0.0;
  double logform = 0.0;
  double tail_bound = 0.0;
};

double agm(double a, double b);
ModulusParams modulus_params(double alpha);
JacobiValues jacobi(double u, double alpha);
// Complete integral of the third kind, integrand 1/((1 - n sin^2) sqrt(1 - alpha sin^2)).
double ell_pi3(double n, double alpha);

std::complex<double> wp(std::complex<double> z, double g2, double g3);

double w_g2(double k);
double w_g3(double k);
WCurveParams w_periods(double k);
// K by the one-dimensional integral over t in [0, 1].
double w_period_direct(double k);
double w_curve(double x, double k);
double w_curve(double x, const WCurveParams& p);
// Nome of the w-curve from the cubic inversion formula.
double w_nome(double k);
WFourier w_fourier(double x, double k, int N);

}  // namespace mlab
