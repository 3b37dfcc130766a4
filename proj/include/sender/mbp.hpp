#pragma once

#include "sender/decompose.hpp"

namespace sender {

struct MbpReport {
  double loss_before = 0.0;
  double loss_after = 0.0;
  int iterations_nonlinear = 0;
  std::vector<double> per_layer_change;  // Frobenius delta of (x, y, u, v) per layer
};

// Backward refinement of the linear stack: per layer, the weight is re-derived
// against the composed deeper feature (psi^+ Z yhat^+) and the composed feature
// is refined by the split multiplicative update, top layer down. A step is kept
// only if the depth-M loss does not increase.
Decomposition mbp_linear(const Matrix& input, Decomposition d, Activation act);

// Gradient-style refinement of the nonlinear stack with step T / 2^it per
// iteration; early halt when all factor deltas drop below 1e-10. Iterations
// that increase the depth-M loss are rolled back.
Decomposition mbp_nonlinear(const Matrix& input, Decomposition d, Activation act, double t_step,
                            int max_iter, int* iterations_out = nullptr);

// Both passes, with the loss measured by the same layer_loss path at depth M.
std::pair<Decomposition, MbpReport> run_mbp(const Matrix& input, Decomposition d,
                                            const SenderConfig& cfg);

}  // namespace sender
