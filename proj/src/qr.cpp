#include "sender/qr.hpp"

#include <cmath>
#include <numeric>

namespace sender {

Matrix QrPair::reconstruct() const {
  Matrix qr = matmul(q, r);
  Matrix out(qr.rows(), qr.cols());
  for (std::size_t j = 0; j < qr.cols(); ++j)
    for (std::size_t i = 0; i < qr.rows(); ++i) out(i, perm[j]) = qr(i, j);
  return out;
}

std::vector<double> QrPair::diag_abs() const {
  const std::size_t L = std::min(r.rows(), r.cols());
  std::vector<double> d(L);
  for (std::size_t i = 0; i < L; ++i) d[i] = std::fabs(r(i, i));
  return d;
}

QrPair qr_decompose(const Matrix& a, bool pivot) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t L = std::min(m, n);

  Matrix work = a;                       // becomes R in-place (m x n), columns permuted
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  // Householder vectors stored column-wise below the diagonal plus betas.
  std::vector<std::vector<double>> vs(L);
  std::vector<double> betas(L, 0.0);

  std::vector<double> colnorm2(n, 0.0);
  if (pivot) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += work(i, j) * work(i, j);
      colnorm2[j] = s;
    }
  }

  auto swap_cols = [&](std::size_t j1, std::size_t j2) {
    if (j1 == j2) return;
    for (std::size_t i = 0; i < m; ++i) std::swap(work(i, j1), work(i, j2));
    std::swap(perm[j1], perm[j2]);
    std::swap(colnorm2[j1], colnorm2[j2]);
  };

  for (std::size_t k = 0; k < L; ++k) {
    if (pivot) {
      std::size_t best = k;
      for (std::size_t j = k + 1; j < n; ++j)
        if (colnorm2[j] > colnorm2[best]) best = j;
      swap_cols(k, best);
    }

    // Householder vector for column k, rows k..m-1.
    double norm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) norm2 += work(i, k) * work(i, k);
    const double norm = std::sqrt(norm2);
    std::vector<double> v(m - k, 0.0);
    double beta = 0.0;
    if (norm > 0.0) {
      const double x0 = work(k, k);
      const double alpha = x0 >= 0.0 ? -norm : norm;
      v[0] = x0 - alpha;
      for (std::size_t i = k + 1; i < m; ++i) v[i - k] = work(i, k);
      double vnorm2 = 0.0;
      for (double vi : v) vnorm2 += vi * vi;
      if (vnorm2 > 0.0) {
        beta = 2.0 / vnorm2;
        // Apply reflection to remaining columns.
        for (std::size_t j = k; j < n; ++j) {
          double dot = 0.0;
          for (std::size_t i = k; i < m; ++i) dot += v[i - k] * work(i, j);
          const double f = beta * dot;
          for (std::size_t i = k; i < m; ++i) work(i, j) -= f * v[i - k];
        }
      }
    }
    vs[k] = std::move(v);
    betas[k] = beta;

    if (pivot) {
      for (std::size_t j = k + 1; j < n; ++j) {
        colnorm2[j] -= work(k, j) * work(k, j);
        if (colnorm2[j] < 0.0) colnorm2[j] = 0.0;
      }
    }
  }

  QrPair out;
  out.pivoted = pivot;
  out.perm = std::move(perm);

  out.r = Matrix(L, n);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = i; j < n; ++j) out.r(i, j) = work(i, j);

  // Accumulate thin Q by applying reflections to the first L identity columns.
  out.q = Matrix(m, L);
  for (std::size_t j = 0; j < L; ++j) out.q(j, j) = 1.0;
  for (std::size_t k = L; k-- > 0;) {
    if (betas[k] == 0.0) continue;
    const auto& v = vs[k];
    for (std::size_t j = 0; j < L; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * out.q(i, j);
      const double f = betas[k] * dot;
      for (std::size_t i = k; i < m; ++i) out.q(i, j) -= f * v[i - k];
    }
  }
  return out;
}

}  // namespace sender
