#include "sender/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sender/kernels.hpp"

namespace sender {

Matrix Matrix::from_data(std::size_t rows, std::size_t cols, std::vector<double> data) {
  if (rows == 0 || cols == 0) throw MatrixError("matrix dimensions must be positive");
  if (data.size() != rows * cols)
    throw MatrixError("data length " + std::to_string(data.size()) + " does not match " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  for (std::size_t i = 0; i < data.size(); ++i)
    if (!std::isfinite(data[i]))
      throw MatrixError("non-finite entry at flat index " + std::to_string(i));
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

namespace {
void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b))
    throw MatrixError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                      std::to_string(b.cols()));
}
}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] + b.data()[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "sub");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
  return c;
}

Matrix operator*(const Matrix& a, double s) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] * s;
  return c;
}

void add_scaled(Matrix& x, const Matrix& d, double s) {
  require_same_shape(x, d, "add_scaled");
  for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += s * d.data()[i];
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] * b.data()[i];
  return c;
}

double frob_norm_sq(const Matrix& a) { return kernels::frob_sq(a); }
double frob_norm(const Matrix& a) { return std::sqrt(kernels::frob_sq(a)); }

double l1_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a.data()[i]);
  return s;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

double max_entry(const Matrix& a) {
  double m = a.data()[0];
  for (std::size_t i = 1; i < a.size(); ++i) m = std::max(m, a.data()[i]);
  return m;
}

bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw MatrixError("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  kernels::matmul(a, b, c);
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw MatrixError("matmul_tn: inner dimensions differ");
  Matrix c(a.cols(), b.cols());
  kernels::matmul_tn(a, b, c);
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw MatrixError("matmul_nt: inner dimensions differ");
  Matrix c(a.rows(), b.rows());
  kernels::matmul_nt(a, b, c);
  return c;
}

std::pair<Matrix, Matrix> pos_neg_split(const Matrix& a) {
  Matrix pos(a.rows(), a.cols()), neg(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = a.data()[i];
    const double av = std::fabs(v);
    pos.data()[i] = (av + v) / 2.0;
    neg.data()[i] = (av - v) / 2.0;
  }
  return {std::move(pos), std::move(neg)};
}

// ---------------- file I/O ----------------

namespace {

constexpr char kMagic[4] = {'S', 'E', 'N', 'D'};

void put_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32_le(std::istream& is, const std::string& path, const char* what) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4))
    throw IoError(path + ": truncated while reading " + what);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64_le(std::ostream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64_le(std::istream& is, const std::string& path, std::size_t index) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8))
    throw IoError(path + ": truncated at value " + std::to_string(index));
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

Matrix read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  std::vector<double> data;
  std::size_t cols = 0, row = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == EOF) break;
    ++row;
    std::size_t col = 0, pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string tok = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
      ++col;
      char* end = nullptr;
      const char* s = tok.c_str();
      double v = std::strtod(s, &end);
      while (end && *end == ' ') ++end;
      if (end == s || (end && *end != '\0'))
        throw IoError(path + ": non-numeric token '" + tok + "' at row " + std::to_string(row) +
                      ", column " + std::to_string(col));
      if (!std::isfinite(v))
        throw IoError(path + ": non-finite value at row " + std::to_string(row) + ", column " +
                      std::to_string(col));
      data.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (cols == 0) {
      cols = col;
    } else if (col != cols) {
      throw IoError(path + ": ragged row " + std::to_string(row) + " has " + std::to_string(col) +
                    " fields, expected " + std::to_string(cols));
    }
  }
  if (row == 0 || cols == 0) throw IoError(path + ": empty csv");
  return Matrix::from_data(row, cols, std::move(data));
}

void write_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw IoError(path + ": write failed");
}

Matrix read_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError(path + ": bad magic, not a SEND matrix file");
  const std::uint32_t rows = get_u32_le(in, path, "rows");
  const std::uint32_t cols = get_u32_le(in, path, "cols");
  if (rows == 0 || cols == 0) throw IoError(path + ": zero dimension in header");
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(rows) * cols);
  for (std::size_t i = 0; i < static_cast<std::size_t>(rows) * cols; ++i) {
    const double v = get_f64_le(in, path, i);
    if (!std::isfinite(v)) throw IoError(path + ": non-finite value at index " + std::to_string(i));
    data.push_back(v);
  }
  return Matrix::from_data(rows, cols, std::move(data));
}

void write_bin(const Matrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out.write(kMagic, 4);
  put_u32_le(out, static_cast<std::uint32_t>(m.rows()));
  put_u32_le(out, static_cast<std::uint32_t>(m.cols()));
  for (std::size_t i = 0; i < m.size(); ++i) put_f64_le(out, m.data()[i]);
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace

Matrix read_matrix(const std::string& path, MatrixFormat format) {
  return format == MatrixFormat::csv ? read_csv(path) : read_bin(path);
}

void write_matrix(const Matrix& m, const std::string& path, MatrixFormat format) {
  if (format == MatrixFormat::csv)
    write_csv(m, path);
  else
    write_bin(m, path);
}

MatrixFormat format_from_name(const std::string& name) {
  if (name == "csv") return MatrixFormat::csv;
  if (name == "bin") return MatrixFormat::bin;
  throw IoError("unknown matrix format '" + name + "' (expected csv or bin)");
}

MatrixFormat format_from_path(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0) return MatrixFormat::bin;
  return MatrixFormat::csv;
}

}  // namespace sender
