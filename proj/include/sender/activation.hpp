#pragma once

#include <cmath>
#include <string>

#include "sender/matrix.hpp"

namespace sender {

enum class Activation { relu, sigmoid };

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);

inline double act_scalar(Activation a, double x) {
  return a == Activation::relu ? (x > 0.0 ? x : 0.0) : 1.0 / (1.0 + std::exp(-x));
}

inline double act_deriv_scalar(Activation a, double x) {
  if (a == Activation::relu) return x > 0.0 ? 1.0 : 0.0;
  const double s = 1.0 / (1.0 + std::exp(-x));
  return s * (1.0 - s);
}

// Inverse and its derivative; sigmoid arguments are clamped into
// [eps, 1 - eps] with eps = 1e-7 first.
inline constexpr double kSigmoidClamp = 1e-7;

inline double act_inverse_scalar(Activation a, double y) {
  if (a == Activation::relu) return y > 0.0 ? y : 0.0;
  const double c = std::min(std::max(y, kSigmoidClamp), 1.0 - kSigmoidClamp);
  return std::log(c / (1.0 - c));
}

inline double act_inverse_deriv_scalar(Activation a, double y) {
  if (a == Activation::relu) return y > 0.0 ? 1.0 : 0.0;
  const double c = std::min(std::max(y, kSigmoidClamp), 1.0 - kSigmoidClamp);
  return 1.0 / (c * (1.0 - c));
}

Matrix activation_apply(Activation a, const Matrix& m);
Matrix activation_deriv(Activation a, const Matrix& m);
Matrix activation_inverse(Activation a, const Matrix& m);
Matrix activation_inverse_deriv(Activation a, const Matrix& m);

// Soft threshold: sign(x) * max(|x| - tau, 0).
Matrix shrinkage(const Matrix& m, double tau);

}  // namespace sender
