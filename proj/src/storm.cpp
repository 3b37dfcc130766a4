#include "sender/storm.hpp"

#include <cmath>

namespace sender {

namespace {
constexpr double kDivergenceGuard = 1e12;

double step_eta(const StormParams& p, double g_sum) {
  return p.k_lr / std::cbrt(p.omega + g_sum);
}
}  // namespace

void StormParams::validate() const {
  if (k_lr <= 0.0) throw StormError("k_lr must be positive");
  if (omega <= 0.0) throw StormError("omega must be positive");
  if (c <= 0.0) throw StormError("c must be positive");
  if (max_iter < 1) throw StormError("max_iter must be at least 1");
  if (grad_tol <= 0.0) throw StormError("grad_tol must be positive");
}

StormState storm_init(const Matrix& x0, const Matrix& g0, const StormParams& p) {
  p.validate();
  if (!x0.same_shape(g0)) throw StormError("storm_init: x0 and g0 shapes differ");
  StormState s;
  s.x = x0;
  s.d = g0;
  s.g_sum = frob_norm_sq(g0);
  s.t = 1;
  s.eta = step_eta(p, s.g_sum);
  return s;
}

StormState storm_step(StormState s, const Matrix& grad_new,
                      const Matrix& grad_old_at_new_sample, const StormParams& p) {
  if (!all_finite(grad_new) || !all_finite(grad_old_at_new_sample))
    throw StormError("storm_step: non-finite gradient");
  if (!grad_new.same_shape(s.x) || !grad_old_at_new_sample.same_shape(s.x))
    throw StormError("storm_step: gradient shape mismatch");

  const double alpha = std::min(1.0, p.c * s.eta * s.eta);
  // d_t = g_new + (1 - alpha) (d_{t-1} - g_old)
  Matrix d = grad_new;
  for (std::size_t i = 0; i < d.size(); ++i)
    d.data()[i] += (1.0 - alpha) * (s.d.data()[i] - grad_old_at_new_sample.data()[i]);

  s.g_sum += frob_norm_sq(grad_new);
  s.eta = step_eta(p, s.g_sum);
  add_scaled(s.x, d, -s.eta);
  s.d = std::move(d);
  s.t += 1;
  return s;
}

StormResult storm_solve(const GradientFn& gradient, const Matrix& x0, const StormParams& p) {
  p.validate();
  StormResult res;
  res.x = x0;

  Matrix g = gradient(res.x);
  if (!all_finite(g)) throw StormError("storm_solve: non-finite gradient at x0");
  double gn = frob_norm(g);
  if (gn <= p.grad_tol) {
    res.grad_norm = gn;
    res.converged = true;
    return res;
  }

  StormState s = storm_init(res.x, g, p);
  Matrix g_prev = std::move(g);
  for (int it = 1; it < p.max_iter; ++it) {
    // x_{t+1} = x_t - eta_t d_t with d_t == g_prev on the first pass
    // (storm_init set d = g0); subsequent d's come from the recursion.
    add_scaled(s.x, s.d, -s.eta);
    if (frob_norm(s.x) > kDivergenceGuard)
      throw StormError("storm_solve: iterate norm exceeded divergence guard");

    Matrix g_new = gradient(s.x);
    if (!all_finite(g_new)) throw StormError("storm_solve: non-finite gradient");
    gn = frob_norm(g_new);
    res.iterations = it;
    if (gn <= p.grad_tol) {
      res.x = std::move(s.x);
      res.grad_norm = gn;
      res.converged = true;
      return res;
    }

    const double alpha = std::min(1.0, p.c * s.eta * s.eta);
    Matrix d = g_new;
    for (std::size_t i = 0; i < d.size(); ++i)
      d.data()[i] += (1.0 - alpha) * (s.d.data()[i] - g_prev.data()[i]);
    s.g_sum += gn * gn;
    s.eta = step_eta(p, s.g_sum);
    s.d = std::move(d);
    g_prev = std::move(g_new);
  }

  res.x = std::move(s.x);
  res.grad_norm = gn;
  res.converged = false;
  return res;
}

}  // namespace sender
