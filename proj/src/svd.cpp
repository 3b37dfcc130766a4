#include "sender/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sender {

namespace {

// One-sided Jacobi on a tall matrix (m >= n): rotates column pairs until all
// are numerically orthogonal. Column norms become the singular values.
Svd jacobi_tall(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  Matrix b = a;
  Matrix v = Matrix::identity(n);
  const double eps = 1e-15;
  const int max_sweeps = 60;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double bp = b(i, p), bq = b(i, q);
          app += bp * bp;
          aqq += bq * bq;
          apq += bp * bq;
        }
        if (std::fabs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double bp = b(i, p), bq = b(i, q);
          b(i, p) = c * bp - s * bq;
          b(i, q) = s * bp + c * bq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) s2 += b(i, j) * b(i, j);
    sv[j] = std::sqrt(s2);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sv[i] > sv[j]; });

  Svd out;
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  out.s.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.s[j] = sv[src];
    if (sv[src] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = b(i, src) / sv[src];
    }
    for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
  }
  return out;
}

}  // namespace

Svd svd_decompose(const Matrix& a) {
  if (a.rows() >= a.cols()) return jacobi_tall(a);
  Svd t = jacobi_tall(a.transposed());
  Svd out;
  out.u = std::move(t.v);
  out.v = std::move(t.u);
  out.s = std::move(t.s);
  return out;
}

std::vector<double> singular_values(const Matrix& a) { return svd_decompose(a).s; }

Matrix pseudo_inverse(const Matrix& a) {
  const Svd f = svd_decompose(a);
  const double smax = f.s.empty() ? 0.0 : f.s.front();
  const double cutoff =
      smax * static_cast<double>(std::max(a.rows(), a.cols())) * 0x1.0p-52;
  // a+ = v * diag(1/s) * u^T, zeroing singular values at or below the cutoff
  Matrix vs = f.v;  // n x L, scale columns
  for (std::size_t j = 0; j < f.s.size(); ++j) {
    const double inv = (f.s[j] > cutoff && f.s[j] > 0.0) ? 1.0 / f.s[j] : 0.0;
    for (std::size_t i = 0; i < vs.rows(); ++i) vs(i, j) *= inv;
  }
  return matmul_nt(vs, f.u);
}

}  // namespace sender
