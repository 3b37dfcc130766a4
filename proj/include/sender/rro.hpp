#pragma once

#include <vector>

#include "sender/matrix.hpp"

namespace sender {

class RroError : public std::runtime_error {
 public:
  explicit RroError(const std::string& msg) : std::runtime_error(msg) {}
};

// Which special-case rule (if any) fixed the estimate; `fallback_max` means
// none fired and the estimate is max(pos_wd, pos_wr, pos_wc).
enum class RankRule { wd_value_one, wr_unique_max, wc_value_one, wc_unique_max, fallback_max };

struct RankEstimate {
  std::size_t rank = 1;
  std::size_t pos_wd = 1;  // 1-based argmax positions
  std::size_t pos_wr = 1;
  std::size_t pos_wc = 1;
  std::vector<double> wd, wr, wc;
  RankRule rule = RankRule::fallback_max;
};

struct RroOptions {
  bool pivot = true;          // pivoted QR keeps |diag(R)| non-increasing
  bool wd_reverse_denominator = false;  // alternative denominator variant
};

// Per-position statistics over the QR diagonal / columns. Sequences are
// 1-based in the positions they report; wc covers column triples (i-2,i-1,i)
// for i = 3..n, so its argmax position p refers to triple p (entry p-1).
std::vector<double> weighted_ratio(const std::vector<double>& d);
std::vector<double> weighted_difference(const std::vector<double>& d,
                                        bool reverse_denominator = false);
std::vector<double> weighted_correlation(const Matrix& r);

RankEstimate estimate_rank(const Matrix& m, const RroOptions& opts = {});

}  // namespace sender
