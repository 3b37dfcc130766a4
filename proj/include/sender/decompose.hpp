#pragma once

#include <vector>

#include "sender/config.hpp"
#include "sender/matrix.hpp"
#include "sender/rro.hpp"

namespace sender {

class DecomposeError : public std::runtime_error {
 public:
  explicit DecomposeError(const std::string& msg) : std::runtime_error(msg) {}
};

// One layer's factors. Shapes: x r_{k-1} x r_k, y r_k x Q, u s_{k-1} x s_k,
// v s_k x Q, s P x Q (r_0 = s_0 = P).
struct LayerFactors {
  Matrix x, y, u, v, s;
  std::size_t rank_linear = 0;
  std::size_t rank_nonlinear = 0;
};

enum class Termination { rank_one, max_sweeps };

struct SweepRecord {
  int sweep = 0;  // 1-based within the layer
  int layer = 0;  // 1-based
  double loss = 0.0;
};

struct Decomposition {
  std::vector<LayerFactors> layers;
  std::size_t depth = 0;
  std::vector<SweepRecord> loss_history;
  Termination terminated_by = Termination::rank_one;
  // RRO estimates per layer: (linear, nonlinear)
  std::vector<std::pair<RankEstimate, RankEstimate>> rank_estimates;
};

// Composed products of upstream factors; a[k] = x_1 ... x_{k+1} so the frame
// feeding layer k (0-based) is a[k-1], identity for the first layer.
struct Frames {
  std::vector<Matrix> a;
  std::vector<Matrix> b;
};
Frames compose_frames(const Decomposition& d, std::size_t input_rows);

// Augmented-Lagrangian value of one layer against its residual input:
// (rho/2) ||resid - A x y - B u act(v) - s||_F^2 + (1/rho) ||s||_1.
// Null frame pointers mean identity.
double layer_loss(const Matrix& resid, const Matrix* a_frame, const Matrix* b_frame,
                  const LayerFactors& lf, double rho, Activation act);

struct SmoothGradients {
  Matrix gx, gy, gu, gv;
};
// Analytic gradients of the smooth term, for the finite-difference checks.
SmoothGradients smooth_gradients(const Matrix& resid, const Matrix* a_frame,
                                 const Matrix* b_frame, const LayerFactors& lf, double rho,
                                 Activation act);

// One alternation sweep: STORM solves for x, y, u, v on the smooth term, then
// s <- shrinkage(resid - model, 1/rho).
void update_layer(const Matrix& resid, const Matrix* a_frame, const Matrix* b_frame,
                  LayerFactors& lf, const SenderConfig& cfg);

Decomposition decompose(const Matrix& input, const SenderConfig& cfg);

// psi_M y_M + (prod u) act(v_M) + sum_k s_k
Matrix reconstruct(const Decomposition& d, std::size_t input_rows, Activation act);

// Residual input of each layer: resid[k] = input - sum_{j<k} s_j.
std::vector<Matrix> layer_residuals(const Matrix& input, const Decomposition& d);

}  // namespace sender
