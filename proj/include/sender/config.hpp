#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sender/activation.hpp"
#include "sender/storm.hpp"

namespace sender {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SenderConfig {
  double rho = 10.0;                    // penalty; shrinkage threshold is 1/rho
  Activation activation = Activation::relu;
  StormParams storm;                    // k_lr 0.1, omega 1.0, c 100, 500 iters, tol 1e-6
  std::optional<std::size_t> initial_rank;  // nullopt = auto: floor(min(dims)/2), >= 2
  int max_outer_sweeps = 200;
  double outer_tol = 1e-6;
  std::uint64_t seed = 0;
  bool mbp_enabled = true;
  double mbp_t = 0.01;
  int mbp_max_iter = 20;

  void validate() const;

  std::size_t resolve_initial_rank(std::size_t rows, std::size_t cols) const;

  // Flat JSON with keys mirroring the fields; unknown keys rejected, missing
  // keys take the defaults above.
  static SenderConfig from_json_text(const std::string& text);
  static SenderConfig load(const std::string& path);
  std::string to_json_text() const;
};

}  // namespace sender
