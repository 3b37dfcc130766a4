#include "sender/mbp.hpp"

#include <cmath>

#include "sender/activation.hpp"
#include "sender/svd.hpp"

namespace sender {

namespace {

constexpr double kRatioFloor = 1e-12;

double depth_loss(const Matrix& input, const Decomposition& d, double rho, Activation act) {
  const auto resids = layer_residuals(input, d);
  const Frames f = compose_frames(d, input.rows());
  const std::size_t m = d.layers.size();
  const Matrix* af = m > 1 ? &f.a[m - 2] : nullptr;
  const Matrix* bf = m > 1 ? &f.b[m - 2] : nullptr;
  return layer_loss(resids[m - 1], af, bf, d.layers[m - 1], rho, act);
}

// Split multiplicative refinement of yhat against the data-level target z
// through the basis psi. The positive and negative parts are coupled through
// the full KKT decomposition so an exact solution is a fixed point; with a
// nonnegative yhat and [psi^T z]^- = 0 it reduces to the plain ratio form.
Matrix refine_feature(const Matrix& psi, const Matrix& z, const Matrix& yhat) {
  const Matrix m1 = matmul_tn(psi, z);    // psi^T z
  const Matrix m2 = matmul_tn(psi, psi);  // psi^T psi
  auto [p, n] = pos_neg_split(m1);
  auto [gp, gn] = pos_neg_split(m2);
  auto [yp, yn] = pos_neg_split(yhat);

  const Matrix gp_yp = matmul(gp, yp), gn_yp = matmul(gn, yp);
  const Matrix gp_yn = matmul(gp, yn), gn_yn = matmul(gn, yn);

  Matrix out(yhat.rows(), yhat.cols());
  for (std::size_t i = 0; i < out.size(); ++i) {
    // gradient split: grad = a - b with a, b >= 0; positive part scales by
    // sqrt(b/a), negative part by the reciprocal ratio
    const double a = n.data()[i] + gp_yp.data()[i] + gn_yn.data()[i];
    const double b = p.data()[i] + gn_yp.data()[i] + gp_yn.data()[i];
    double ypos = yp.data()[i];
    double yneg = yn.data()[i];
    if (a > kRatioFloor) ypos *= std::sqrt(std::max(b, 0.0) / a);
    if (b > kRatioFloor) yneg *= std::sqrt(std::max(a, 0.0) / b);
    out.data()[i] = ypos - yneg;
  }
  return out;
}

}  // namespace

Decomposition mbp_linear(const Matrix& input, Decomposition d, Activation act) {
  if (d.layers.empty()) throw DecomposeError("mbp_linear: empty decomposition");
  const std::size_t m = d.layers.size();
  const auto resids = layer_residuals(input, d);
  const double rho_probe = 2.0;  // any rho ranks candidate states identically
  double best = depth_loss(input, d, rho_probe, act);

  // Per-layer linear reconstructions frozen at entry.
  Frames f0 = compose_frames(d, input.rows());
  std::vector<Matrix> z_cap;
  z_cap.reserve(m);
  for (std::size_t k = 0; k < m; ++k) z_cap.push_back(matmul(f0.a[k], d.layers[k].y));

  Matrix yhat = d.layers[m - 1].y;
  for (std::size_t k = m; k-- > 0;) {
    LayerFactors& lf = d.layers[k];
    const Matrix old_x = lf.x;
    const Matrix old_y = lf.y;

    // Transfer the layer's fit onto the composed deeper feature.
    Matrix x_new = k == 0 ? matmul(z_cap[0], pseudo_inverse(yhat))
                          : matmul(pseudo_inverse(f0.a[k - 1]),
                                   matmul(z_cap[k], pseudo_inverse(yhat)));
    lf.x = std::move(x_new);

    // Data-level linear target for the feature refinement.
    const Matrix psi = k == 0 ? lf.x : matmul(f0.a[k - 1], lf.x);
    Matrix z = resids[k] - matmul(f0.b[k], activation_apply(act, lf.v)) - lf.s;
    lf.y = refine_feature(psi, z, yhat);

    const double cand = depth_loss(input, d, rho_probe, act);
    if (cand <= best * (1.0 + 1e-12)) {
      best = std::min(best, cand);
    } else {
      lf.x = old_x;
      lf.y = old_y;
    }
    if (k > 0) yhat = matmul(d.layers[k].x, d.layers[k].y);
  }
  return d;
}

Decomposition mbp_nonlinear(const Matrix& input, Decomposition d, Activation act, double t_step,
                            int max_iter, int* iterations_out) {
  if (d.layers.empty()) throw DecomposeError("mbp_nonlinear: empty decomposition");
  const std::size_t m = d.layers.size();
  const auto resids = layer_residuals(input, d);
  const double rho_probe = 2.0;
  double best = depth_loss(input, d, rho_probe, act);
  int done = 0;

  for (int it = 1; it <= max_iter; ++it) {
    const Frames f = compose_frames(d, input.rows());
    const LayerFactors& last = d.layers[m - 1];
    // Global nonlinear residual; zero when the decomposition is exact.
    Matrix r_nl = resids[m - 1] - matmul(f.a[m - 1], last.y) - last.s -
                  matmul(f.b[m - 1], activation_apply(act, last.v));
    if (!all_finite(r_nl))
      throw DecomposeError("mbp_nonlinear: non-finite residual at iteration " +
                           std::to_string(it));

    const double step = t_step / std::pow(2.0, it);
    std::vector<std::pair<Matrix, Matrix>> saved;
    saved.reserve(m);
    double max_delta = 0.0;

    for (std::size_t k = 0; k < m; ++k) {
      LayerFactors& lf = d.layers[k];
      saved.emplace_back(lf.u, lf.v);
      const Matrix s_mat = matmul(lf.u, lf.v);
      const Matrix dinv = activation_inverse_deriv(act, s_mat);
      if (!all_finite(dinv))
        throw DecomposeError("mbp_nonlinear: non-finite inverse derivative at layer " +
                             std::to_string(k + 1) + ", iteration " + std::to_string(it));
      const double cmax = k == 0 ? 1.0 : max_entry(d.layers[k - 1].u);
      // Residual backprojected into this layer's input coordinates.
      const Matrix chain = k == 0 ? r_nl : matmul_tn(f.b[k - 1], r_nl);
      const Matrix ck = matmul_tn(lf.u, hadamard(chain, dinv)) * cmax;
      const Matrix dk = matmul_nt(hadamard(chain, dinv), lf.v);
      add_scaled(lf.v, ck, -step);
      add_scaled(lf.u, dk, -step);
      max_delta = std::max(max_delta, step * std::max(max_abs(ck), max_abs(dk)));
    }

    const double cand = depth_loss(input, d, rho_probe, act);
    if (cand <= best * (1.0 + 1e-12)) {
      best = std::min(best, cand);
      done = it;
    } else {
      for (std::size_t k = 0; k < m; ++k) {
        d.layers[k].u = std::move(saved[k].first);
        d.layers[k].v = std::move(saved[k].second);
      }
    }
    if (max_delta < 1e-10) break;
  }
  if (iterations_out) *iterations_out = done;
  return d;
}

std::pair<Decomposition, MbpReport> run_mbp(const Matrix& input, Decomposition d,
                                            const SenderConfig& cfg) {
  MbpReport rep;
  rep.loss_before = depth_loss(input, d, cfg.rho, cfg.activation);
  if (!cfg.mbp_enabled) {
    rep.loss_after = rep.loss_before;
    return {std::move(d), rep};
  }

  std::vector<Matrix> before_x, before_y, before_u, before_v;
  for (const auto& lf : d.layers) {
    before_x.push_back(lf.x);
    before_y.push_back(lf.y);
    before_u.push_back(lf.u);
    before_v.push_back(lf.v);
  }

  d = mbp_linear(input, std::move(d), cfg.activation);
  d = mbp_nonlinear(input, std::move(d), cfg.activation, cfg.mbp_t, cfg.mbp_max_iter,
                    &rep.iterations_nonlinear);

  rep.loss_after = depth_loss(input, d, cfg.rho, cfg.activation);
  for (std::size_t k = 0; k < d.layers.size(); ++k) {
    const double delta = frob_norm(d.layers[k].x - before_x[k]) +
                         frob_norm(d.layers[k].y - before_y[k]) +
                         frob_norm(d.layers[k].u - before_u[k]) +
                         frob_norm(d.layers[k].v - before_v[k]);
    rep.per_layer_change.push_back(delta);
  }
  return {std::move(d), rep};
}

}  // namespace sender
