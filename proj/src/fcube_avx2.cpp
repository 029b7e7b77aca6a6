#include <immintrin.h>

#include "fcube_kernels.hpp"

namespace mlab::detail {

double cube_row_avx2(double A, double P, const double* B, const double* sB, std::size_t n) {
  const __m256d a = _mm256_set1_pd(A);
  const __m256d p = _mm256_set1_pd(P);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t j = 0; j < n; j += 4) {
    __m256d r = _mm256_div_pd(p, _mm256_add_pd(a, _mm256_loadu_pd(B + j)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(sB + j), _mm256_mul_pd(r, r)));
  }
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

}  // namespace mlab::detail
