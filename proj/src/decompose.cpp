#include "sender/decompose.hpp"

#include <cmath>

#include "sender/activation.hpp"
#include "sender/rng.hpp"
#include "sender/storm.hpp"
#include "sender/svd.hpp"

namespace sender {

namespace {

Matrix frame_mul(const Matrix* f, const Matrix& x) { return f ? matmul(*f, x) : x; }
Matrix frame_mul_tn(const Matrix* f, const Matrix& x) { return f ? matmul_tn(*f, x) : x; }

// Largest eigenvalue of a small symmetric PSD matrix by power iteration,
// inflated a little so derived steps stay on the stable side.
double lam_max_psd(const Matrix& h) {
  const std::size_t n = h.rows();
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(n, 0.0);
  double lam = 0.0;
  for (int it = 0; it < 50; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += h(i, j) * v[j];
      w[i] = s;
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    lam = norm;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  return 1.1 * lam;
}

// STORM params for one inner solve, scaled so the step starts near
// 0.9 / lam_max and stays there while the gradient-norm sum accrues.
// k_lr acts as a multiplier relative to its 0.1 default; the eta formula
// itself is unchanged.
StormParams derive_inner_params(const StormParams& base, double lam_max, double g0_sq) {
  StormParams p = base;
  const double scale = base.k_lr / 0.1;
  const double eta_tgt = scale * 0.9 / std::max(lam_max, 1e-30);
  p.omega = std::max(base.omega, g0_sq * static_cast<double>(base.max_iter));
  p.k_lr = eta_tgt * std::cbrt(p.omega);
  return p;
}

Matrix solve_quadratic(const GradientFn& grad, const Matrix& x0, double lam_max,
                       const StormParams& base) {
  Matrix g0 = grad(x0);
  const double g0_sq = frob_norm_sq(g0);
  if (std::sqrt(g0_sq) <= base.grad_tol) return x0;
  const StormParams p = derive_inner_params(base, lam_max, g0_sq);
  return storm_solve(grad, x0, p).x;
}

// Match ||x column j|| with ||y row j||; x y is invariant.
void rebalance(Matrix& x, Matrix& y) {
  const std::size_t r = x.cols();
  for (std::size_t j = 0; j < r; ++j) {
    double cx = 0.0, ry = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) cx += x(i, j) * x(i, j);
    for (std::size_t k = 0; k < y.cols(); ++k) ry += y(j, k) * y(j, k);
    cx = std::sqrt(std::max(cx, 1e-24));
    ry = std::sqrt(std::max(ry, 1e-24));
    const double s = std::sqrt(cx / ry);
    for (std::size_t i = 0; i < x.rows(); ++i) x(i, j) /= s;
    for (std::size_t k = 0; k < y.cols(); ++k) y(j, k) *= s;
  }
}

}  // namespace

Frames compose_frames(const Decomposition& d, std::size_t input_rows) {
  (void)input_rows;
  Frames f;
  for (const auto& lf : d.layers) {
    if (f.a.empty()) {
      f.a.push_back(lf.x);
      f.b.push_back(lf.u);
    } else {
      f.a.push_back(matmul(f.a.back(), lf.x));
      f.b.push_back(matmul(f.b.back(), lf.u));
    }
  }
  return f;
}

double layer_loss(const Matrix& resid, const Matrix* a_frame, const Matrix* b_frame,
                  const LayerFactors& lf, double rho, Activation act) {
  Matrix e = resid - frame_mul(a_frame, matmul(lf.x, lf.y)) -
             frame_mul(b_frame, matmul(lf.u, activation_apply(act, lf.v))) - lf.s;
  return 0.5 * rho * frob_norm_sq(e) + l1_norm(lf.s) / rho;
}

SmoothGradients smooth_gradients(const Matrix& resid, const Matrix* a_frame,
                                 const Matrix* b_frame, const LayerFactors& lf, double rho,
                                 Activation act) {
  const Matrix av = activation_apply(act, lf.v);
  Matrix e = resid - frame_mul(a_frame, matmul(lf.x, lf.y)) -
             frame_mul(b_frame, matmul(lf.u, av)) - lf.s;
  SmoothGradients g;
  const Matrix ate = frame_mul_tn(a_frame, e);  // A^T E
  const Matrix bte = frame_mul_tn(b_frame, e);  // B^T E
  g.gx = matmul_nt(ate, lf.y) * (-rho);
  g.gy = matmul_tn(frame_mul(a_frame, lf.x), e) * (-rho);
  g.gu = matmul_nt(bte, av) * (-rho);
  Matrix bue = matmul_tn(frame_mul(b_frame, lf.u), e);
  g.gv = hadamard(bue, activation_deriv(act, lf.v)) * (-rho);
  return g;
}

void update_layer(const Matrix& resid, const Matrix* a_frame, const Matrix* b_frame,
                  LayerFactors& lf, const SenderConfig& cfg) {
  const double rho = cfg.rho;
  const Activation act = cfg.activation;
  const StormParams& sp = cfg.storm;
  const double act_deriv_max = act == Activation::relu ? 1.0 : 0.25;

  // Target with the current background held out.
  Matrix target = resid - lf.s;

  // ---- x: grad = -rho (A^T C y^T - A^T A x y y^T), C = target - B u act(v)
  Matrix av = activation_apply(act, lf.v);
  Matrix c1 = target - frame_mul(b_frame, matmul(lf.u, av));
  {
    const Matrix atc_yt = matmul_nt(frame_mul_tn(a_frame, c1), lf.y);
    const Matrix yyt = matmul_nt(lf.y, lf.y);
    double lam;
    if (a_frame) {
      const Matrix ata = matmul_tn(*a_frame, *a_frame);
      lam = rho * lam_max_psd(ata) * lam_max_psd(yyt);
      lf.x = solve_quadratic(
          [&](const Matrix& xc) {
            return (atc_yt - matmul(ata, matmul(xc, yyt))) * (-rho);
          },
          lf.x, lam, sp);
    } else {
      lam = rho * lam_max_psd(yyt);
      lf.x = solve_quadratic(
          [&](const Matrix& xc) { return (atc_yt - matmul(xc, yyt)) * (-rho); }, lf.x, lam, sp);
    }
  }

  // ---- y: grad = -rho (G - H y), G = (A x)^T C, H = (A x)^T (A x)
  const Matrix ax = frame_mul(a_frame, lf.x);
  {
    const Matrix g = matmul_tn(ax, c1);
    const Matrix h = matmul_tn(ax, ax);
    const double lam = rho * lam_max_psd(h);
    lf.y = solve_quadratic(
        [&](const Matrix& yc) { return (g - matmul(h, yc)) * (-rho); }, lf.y, lam, sp);
  }

  // ---- u: grad = -rho (B^T C2 av^T - B^T B u av av^T), C2 = target - A x y
  Matrix c2 = target - matmul(ax, lf.y);
  {
    const Matrix btc_avt = matmul_nt(frame_mul_tn(b_frame, c2), av);
    const Matrix avvt = matmul_nt(av, av);
    if (b_frame) {
      const Matrix btb = matmul_tn(*b_frame, *b_frame);
      const double lam = rho * lam_max_psd(btb) * lam_max_psd(avvt);
      lf.u = solve_quadratic(
          [&](const Matrix& uc) {
            return (btc_avt - matmul(btb, matmul(uc, avvt))) * (-rho);
          },
          lf.u, lam, sp);
    } else {
      const double lam = rho * lam_max_psd(avvt);
      lf.u = solve_quadratic(
          [&](const Matrix& uc) { return (btc_avt - matmul(uc, avvt)) * (-rho); }, lf.u, lam, sp);
    }
  }

  // ---- v: grad = -rho (G2 - H2 act(v)) .* act'(v)
  const Matrix bu = frame_mul(b_frame, lf.u);
  {
    const Matrix g2 = matmul_tn(bu, c2);
    const Matrix h2 = matmul_tn(bu, bu);
    const double lam = rho * lam_max_psd(h2) * act_deriv_max * act_deriv_max;
    lf.v = solve_quadratic(
        [&](const Matrix& vc) {
          Matrix inner = g2 - matmul(h2, activation_apply(act, vc));
          return hadamard(inner, activation_deriv(act, vc)) * (-rho);
        },
        lf.v, lam, sp);
  }

  // ---- s: proximal refresh from the current full residual
  Matrix model_resid =
      resid - matmul(ax, lf.y) - matmul(bu, activation_apply(act, lf.v));
  lf.s = shrinkage(model_resid, 1.0 / rho);

  // Keep factor scales matched (products unchanged; relu is positive
  // homogeneous so u/act(v) rebalancing is exact).
  rebalance(lf.x, lf.y);
  if (act == Activation::relu) rebalance(lf.u, lf.v);
}

Decomposition decompose(const Matrix& input, const SenderConfig& cfg) {
  cfg.validate();
  if (max_abs(input) == 0.0) throw DecomposeError("decompose: all-zero input is degenerate");
  if (std::min(input.rows(), input.cols()) < 3)
    throw DecomposeError("decompose: min(rows, cols) must be at least 3");

  const std::size_t p = input.rows(), q = input.cols();
  const std::size_t r0 = cfg.resolve_initial_rank(p, q);
  Rng rng(cfg.seed);

  Decomposition d;
  Matrix resid = input;
  Matrix a_frame, b_frame;  // composed products, valid from layer 2 on
  std::size_t r_lin = r0, r_nl = r0;
  d.terminated_by = Termination::rank_one;

  while (true) {
    const std::size_t k = d.layers.size() + 1;
    const Matrix* af = k == 1 ? nullptr : &a_frame;
    const Matrix* bf = k == 1 ? nullptr : &b_frame;
    const std::size_t rows_a = k == 1 ? p : a_frame.cols();
    const std::size_t rows_b = k == 1 ? p : b_frame.cols();

    LayerFactors lf;
    const double xs = 1.0 / std::sqrt(static_cast<double>(r_lin));
    const double us = 1.0 / std::sqrt(static_cast<double>(r_nl));
    lf.x = rng.uniform_matrix(rows_a, r_lin, -0.5, 0.5) * xs;
    lf.u = rng.uniform_matrix(rows_b, r_nl, -0.5, 0.5) * us;
    lf.v = rng.uniform_matrix(r_nl, q, -0.5, 0.5) * us;
    if (k == 1) {
      lf.y = rng.uniform_matrix(r_lin, q, -0.5, 0.5) * xs;
    } else {
      // warm start: least-squares fit of y against the previous layer's
      // feature, y = x^+ y_{k-1}
      lf.y = matmul(pseudo_inverse(lf.x), d.layers.back().y);
    }
    lf.s = Matrix(p, q);
    lf.rank_linear = r_lin;
    lf.rank_nonlinear = r_nl;

    double prev = 0.0;
    bool have_prev = false;
    for (int sweep = 1; sweep <= cfg.max_outer_sweeps; ++sweep) {
      update_layer(resid, af, bf, lf, cfg);
      const double loss = layer_loss(resid, af, bf, lf, cfg.rho, cfg.activation);
      d.loss_history.push_back({sweep, static_cast<int>(k), loss});
      if (have_prev &&
          std::fabs(prev - loss) <= cfg.outer_tol * std::max(std::fabs(prev), 1e-30))
        break;
      prev = loss;
      have_prev = true;
    }

    RankEstimate est_y = estimate_rank(lf.y);
    RankEstimate est_v = estimate_rank(lf.v);
    d.rank_estimates.emplace_back(est_y, est_v);
    d.layers.push_back(std::move(lf));

    if (std::min(est_y.rank, est_v.rank) <= 1) {
      d.terminated_by = Termination::rank_one;
      break;
    }
    if (d.layers.size() >= r0) {
      d.terminated_by = Termination::max_sweeps;
      break;
    }

    const LayerFactors& last = d.layers.back();
    a_frame = (d.layers.size() == 1) ? last.x : matmul(a_frame, last.x);
    b_frame = (d.layers.size() == 1) ? last.u : matmul(b_frame, last.u);
    resid = resid - last.s;
    r_lin = est_y.rank;
    r_nl = est_v.rank;
  }

  d.depth = d.layers.size();
  return d;
}

Matrix reconstruct(const Decomposition& d, std::size_t input_rows, Activation act) {
  if (d.layers.empty()) throw DecomposeError("reconstruct: empty decomposition");
  Frames f = compose_frames(d, input_rows);
  const LayerFactors& last = d.layers.back();
  Matrix out = matmul(f.a.back(), last.y) + matmul(f.b.back(), activation_apply(act, last.v));
  for (const auto& lf : d.layers) out = out + lf.s;
  return out;
}

std::vector<Matrix> layer_residuals(const Matrix& input, const Decomposition& d) {
  std::vector<Matrix> res;
  Matrix r = input;
  for (const auto& lf : d.layers) {
    res.push_back(r);
    r = r - lf.s;
  }
  return res;
}

}  // namespace sender
