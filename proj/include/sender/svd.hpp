#pragma once

#include <vector>

#include "sender/matrix.hpp"

namespace sender {

// Thin SVD, a = u * diag(s) * v^T with s sorted descending.
struct Svd {
  Matrix u;               // m x L
  std::vector<double> s;  // L = min(m, n)
  Matrix v;               // n x L
};

// One-sided Jacobi; accurate for the small/medium dense matrices used here.
Svd svd_decompose(const Matrix& a);

std::vector<double> singular_values(const Matrix& a);

// Moore-Penrose inverse via SVD with cutoff sigma_max * max(m,n) * 2^-52.
Matrix pseudo_inverse(const Matrix& a);

}  // namespace sender
