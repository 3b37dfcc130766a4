#pragma once

#include <vector>

#include "sender/matrix.hpp"

namespace sender {

// Thin Householder QR. With pivoting enabled (the default) columns are chosen
// by largest remaining norm, so |diag(r)| is non-increasing and
// q * r == input-with-columns-permuted-by-perm. reconstruct() undoes the
// permutation.
struct QrPair {
  Matrix q;                      // m x L, orthonormal columns, L = min(m, n)
  Matrix r;                      // L x n, upper triangular
  std::vector<std::size_t> perm; // column j of q*r is column perm[j] of the input
  bool pivoted = false;

  Matrix reconstruct() const;    // q * r * P^{-1}
  std::vector<double> diag_abs() const;
};

QrPair qr_decompose(const Matrix& a, bool pivot = true);

}  // namespace sender
