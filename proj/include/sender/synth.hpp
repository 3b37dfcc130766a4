#pragma once

#include <cstdint>
#include <vector>

#include "sender/decompose.hpp"

namespace sender {

class SynthError : public std::runtime_error {
 public:
  explicit SynthError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SynthSpec {
  std::size_t rows = 0, cols = 0;
  std::vector<std::size_t> layer_ranks_linear;     // strictly decreasing
  std::vector<std::size_t> layer_ranks_nonlinear;  // strictly decreasing
  double sparsity = 0.02;   // fraction of nonzeros in each s_k
  double noise_sigma = 0.0;
  Activation activation = Activation::relu;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GroundTruth {
  std::vector<LayerFactors> layers;
  Matrix clean;
  Matrix noisy;
};

// Seeded hierarchical generator: chain factors uniform(-0.5, 0.5)/sqrt(rank),
// sparse backgrounds with magnitudes above the default recovery threshold,
// clean = (prod x) y_M + (prod u) act(v_M) + sum s_k, noisy = clean + N(0, sigma^2).
GroundTruth gen_hierarchical(const SynthSpec& spec);

// Seeded column shuffle; first ceil(n/2) columns -> test, rest -> retest.
std::pair<Matrix, Matrix> split_test_retest(const Matrix& input, std::uint64_t seed);

}  // namespace sender
