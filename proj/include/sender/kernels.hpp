#pragma once

#include <cstddef>

namespace sender {

struct Matrix;

namespace kernels {

// Thread count for the parallel kernels. 1 (the default) runs the same code
// path single-threaded; results are bit-identical for any count because every
// output element is reduced in a fixed serial order.
void set_threads(int n);
int threads();

// c = a * b
void matmul(const Matrix& a, const Matrix& b, Matrix& c);
// c = a^T * b
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c);
// c = a * b^T
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c);

// Sum of squared entries, accumulated row by row so the reduction order does
// not depend on the thread count.
double frob_sq(const Matrix& a);

namespace serial {
// Reference implementations used by the tests and the benchmark; identical
// arithmetic to the parallel versions above.
void matmul(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c);
double frob_sq(const Matrix& a);
}  // namespace serial

}  // namespace kernels
}  // namespace sender
