#pragma once

#include <cstddef>

namespace mlab::detail {

// sum_j sB[j] (P / (A + B[j]))^2 over n entries (n a multiple of 4),
// accumulated in four interleaved lanes and combined as (l0 + l1) + (l2 + l3).
double cube_row_scalar(double A, double P, const double* B, const double* sB, std::size_t n);
double cube_row_avx2(double A, double P, const double* B, const double* sB, std::size_t n);

}  // namespace mlab::detail
