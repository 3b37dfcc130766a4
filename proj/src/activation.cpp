#include "sender/activation.hpp"

namespace sender {

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  throw MatrixError("unknown activation '" + name + "' (expected relu or sigmoid)");
}

std::string activation_name(Activation a) {
  return a == Activation::relu ? "relu" : "sigmoid";
}

namespace {
template <typename F>
Matrix map(const Matrix& m, F f) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) out.data()[i] = f(m.data()[i]);
  return out;
}
}  // namespace

Matrix activation_apply(Activation a, const Matrix& m) {
  return map(m, [a](double x) { return act_scalar(a, x); });
}

Matrix activation_deriv(Activation a, const Matrix& m) {
  return map(m, [a](double x) { return act_deriv_scalar(a, x); });
}

Matrix activation_inverse(Activation a, const Matrix& m) {
  return map(m, [a](double x) { return act_inverse_scalar(a, x); });
}

Matrix activation_inverse_deriv(Activation a, const Matrix& m) {
  return map(m, [a](double x) { return act_inverse_deriv_scalar(a, x); });
}

Matrix shrinkage(const Matrix& m, double tau) {
  if (tau <= 0.0) throw MatrixError("shrinkage: tau must be positive");
  return map(m, [tau](double x) {
    const double a = std::fabs(x) - tau;
    return a > 0.0 ? (x > 0.0 ? a : -a) : 0.0;
  });
}

}  // namespace sender
