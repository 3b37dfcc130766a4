#pragma once

#include <cstdint>
#include <functional>

#include "sender/matrix.hpp"

namespace sender {

class StormError : public std::runtime_error {
 public:
  explicit StormError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StormParams {
  double k_lr = 0.1;      // learning-rate scale k
  double omega = 1.0;     // offset in the step denominator
  double c = 100.0;       // momentum weight scale
  int max_iter = 500;
  double grad_tol = 1e-6;

  void validate() const;
};

// State of one solve. eta == k_lr / (omega + g_sum)^{1/3} at all times.
struct StormState {
  Matrix x;       // current iterate
  Matrix d;       // momentum gradient estimate
  double g_sum = 0.0;
  std::int64_t t = 0;
  double eta = 0.0;
};

StormState storm_init(const Matrix& x0, const Matrix& g0, const StormParams& p);

// One recursion step. grad_new = grad f(x_t, xi_t) at the current point;
// grad_old_at_new_sample = grad f(x_{t-1}, xi_t), same sample at the previous
// point (in deterministic use both are the exact gradient).
StormState storm_step(StormState state, const Matrix& grad_new,
                      const Matrix& grad_old_at_new_sample, const StormParams& p);

using GradientFn = std::function<Matrix(const Matrix&)>;

struct StormResult {
  Matrix x;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Deterministic solve: runs the recursion with the exact gradient until
// ||grad|| <= grad_tol or max_iter. Aborts with StormError if ||x|| exceeds
// the divergence guard.
StormResult storm_solve(const GradientFn& gradient, const Matrix& x0, const StormParams& p);

}  // namespace sender
