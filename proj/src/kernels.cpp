#include "sender/kernels.hpp"

#include "sender/matrix.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sender {
namespace kernels {

namespace {
int g_threads = 1;
}

void set_threads(int n) { g_threads = n < 1 ? 1 : n; }
int threads() { return g_threads; }

// Each output row is produced by exactly one thread and its inner loops run in
// a fixed order, so parallel results match the serial reference bit for bit.

void matmul(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(g_threads) if (g_threads > 1 && m > 1)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    double* ci = pc + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = pa + i * k;
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = ai[l];
      const double* bl = pb + l * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c) {
  // c = a^T b : (k x m)^T is m x k; result k x n
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(g_threads) if (g_threads > 1 && k > 1)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(k); ++i) {
    double* ci = pc + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
      const double ali = pa[l * k + i];
      const double* bl = pb + l * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += ali * bl[j];
    }
  }
}

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c) {
  // c = a b^T : result m x r where b is r x k
  const std::size_t m = a.rows(), k = a.cols(), r = b.rows();
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(g_threads) if (g_threads > 1 && m > 1)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    const double* ai = pa + i * k;
    double* ci = pc + i * r;
    for (std::size_t j = 0; j < r; ++j) {
      const double* bj = pb + j * k;
      double s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += ai[l] * bj[l];
      ci[j] = s;
    }
  }
}

double frob_sq(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> row_sums(m, 0.0);
  const double* pa = a.data();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(g_threads) if (g_threads > 1 && m > 1)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    const double* ai = pa + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += ai[j] * ai[j];
    row_sums[i] = s;
  }
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total;
}

namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = pc + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = pa + i * k;
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = ai[l];
      const double* bl = pb + l * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < k; ++i) {
    double* ci = pc + i * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
      const double ali = pa[l * k + i];
      const double* bl = pb + l * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += ali * bl[j];
    }
  }
}

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), r = b.rows();
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = pa + i * k;
    double* ci = pc + i * r;
    for (std::size_t j = 0; j < r; ++j) {
      const double* bj = pb + j * k;
      double s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += ai[l] * bj[l];
      ci[j] = s;
    }
  }
}

double frob_sq(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  const double* pa = a.data();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = pa + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += ai[j] * ai[j];
    total += s;
  }
  return total;
}

}  // namespace serial
}  // namespace kernels
}  // namespace sender
