#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sender {

class MatrixError : public std::runtime_error {
 public:
  explicit MatrixError(const std::string& msg) : std::runtime_error(msg) {}
};

// Dense real matrix, row-major, 64-bit entries.
struct Matrix {
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw MatrixError("matrix dimensions must be positive");
  }

  // Validates finiteness; the only way external data enters a Matrix.
  static Matrix from_data(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  static Matrix identity(std::size_t n);

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// --- elementwise / BLAS-1 style helpers (all allocate-free on the output) ---
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, double s);
inline Matrix operator*(double s, const Matrix& a) { return a * s; }

void add_scaled(Matrix& x, const Matrix& d, double s);  // x += s * d
Matrix hadamard(const Matrix& a, const Matrix& b);

double frob_norm(const Matrix& a);
double frob_norm_sq(const Matrix& a);
double l1_norm(const Matrix& a);
double max_abs(const Matrix& a);
double max_entry(const Matrix& a);
bool all_finite(const Matrix& a);

// --- products (dispatch into kernels) ---
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a^T b
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a b^T

// pos = (|a|+a)/2, neg = (|a|-a)/2; a == pos - neg exactly.
std::pair<Matrix, Matrix> pos_neg_split(const Matrix& a);

// --- file I/O ---
enum class MatrixFormat { csv, bin };

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// csv: comma separated, no header, one row per line, 17 significant digits.
// bin: magic "SEND", u32-le rows, u32-le cols, row-major f64-le payload.
Matrix read_matrix(const std::string& path, MatrixFormat format);
void write_matrix(const Matrix& m, const std::string& path, MatrixFormat format);

// "csv"/"bin" names for the CLI.
MatrixFormat format_from_name(const std::string& name);
MatrixFormat format_from_path(const std::string& path);  // by extension, csv default

}  // namespace sender
