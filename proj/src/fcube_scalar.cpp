#include "fcube_kernels.hpp"

namespace mlab::detail {

double cube_row_scalar(double A, double P, const double* B, const double* sB, std::size_t n) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < n; j += 4) {
    for (int k = 0; k < 4; ++k) {
      double r = P / (A + B[j + k]);
      l[k] = l[k] + sB[j + k] * (r * r);
    }
  }
  return (l[0] + l[1]) + (l[2] + l[3]);
}

}  // namespace mlab::detail
