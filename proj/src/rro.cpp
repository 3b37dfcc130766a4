#include "sender/rro.hpp"

#include <algorithm>
#include <cmath>

#include "sender/qr.hpp"

namespace sender {

namespace {
constexpr double kDiagFloor = 1e-14;

std::size_t argmax_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;  // 0-based
}

bool unique_max(const std::vector<double>& v) {
  if (v.empty()) return false;
  const double m = *std::max_element(v.begin(), v.end());
  std::size_t count = 0;
  for (double x : v)
    if (x >= m) ++count;
  return count == 1;
}

double pearson(const Matrix& a, std::size_t ca, std::size_t cb) {
  const std::size_t n = a.rows();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += std::fabs(a(i, ca));
    mb += std::fabs(a(i, cb));
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = std::fabs(a(i, ca)) - ma;
    const double db = std::fabs(a(i, cb)) - mb;
    num += da * db;
    va += da * da;
    vb += db * db;
  }
  // zero-variance columns contribute no correlation
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return num / std::sqrt(va * vb);
}
}  // namespace

std::vector<double> weighted_ratio(const std::vector<double>& d) {
  const std::size_t L = d.size();
  if (L < 2) throw RroError("weighted_ratio needs at least 2 diagonal entries");
  std::vector<double> raw(L - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < L; ++i) {
    const double num = std::max(d[i], kDiagFloor);
    const double den = std::max(d[i + 1], kDiagFloor);
    raw[i] = num / den;
    sum += raw[i];
  }
  const double scale = sum > 0.0 ? static_cast<double>(L - 2) / sum : 0.0;
  for (double& x : raw) x *= scale;
  return raw;
}

std::vector<double> weighted_difference(const std::vector<double>& d, bool reverse_denominator) {
  const std::size_t L = d.size();
  if (L < 2) throw RroError("weighted_difference needs at least 2 diagonal entries");
  std::vector<double> wd(L - 1);
  if (reverse_denominator) {
    // variant: denominator walks the reversed vector
    for (std::size_t i = 0; i + 1 < L; ++i) {
      const double den = std::max(d[L - 1 - i], kDiagFloor);
      wd[i] = std::fabs(d[i + 1] - d[i]) / den;
    }
  } else {
    double csum = 0.0;
    for (std::size_t i = 0; i + 1 < L; ++i) {
      csum += d[i];
      wd[i] = std::fabs(d[i + 1] - d[i]) / std::max(csum, kDiagFloor);
    }
  }
  return wd;
}

std::vector<double> weighted_correlation(const Matrix& r) {
  const std::size_t n = r.cols();
  if (n < 3) throw RroError("weighted_correlation needs at least 3 columns");
  std::vector<double> wc(n - 2);
  std::vector<double> colnorm2(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.rows(); ++i) s += r(i, j) * r(i, j);
    colnorm2[j] = s;
  }
  double c_prev = pearson(r, 0, 1);
  for (std::size_t i = 2; i < n; ++i) {
    const double c_next = pearson(r, i - 1, i);
    const double den = colnorm2[i - 2] + colnorm2[i - 1] + colnorm2[i];
    wc[i - 2] = den > 0.0 ? std::fabs(c_prev - c_next) / den : 0.0;
    c_prev = c_next;
  }
  return wc;
}

RankEstimate estimate_rank(const Matrix& m, const RroOptions& opts) {
  const std::size_t L = std::min(m.rows(), m.cols());
  if (L < 2) throw RroError("estimate_rank needs min(rows, cols) >= 2");
  if (max_abs(m) == 0.0) throw RroError("estimate_rank: all-zero input is degenerate");

  const QrPair f = qr_decompose(m, opts.pivot);
  const std::vector<double> d = f.diag_abs();

  RankEstimate est;
  est.wd = weighted_difference(d, opts.wd_reverse_denominator);
  est.wr = weighted_ratio(d);
  est.pos_wd = argmax_first(est.wd) + 1;
  est.pos_wr = argmax_first(est.wr) + 1;
  if (f.r.cols() >= 3) {
    est.wc = weighted_correlation(f.r);
    est.pos_wc = argmax_first(est.wc) + 1;
  } else {
    est.pos_wc = 1;
  }

  // Decision chain: the first firing rule pins the estimate, otherwise fall
  // back to the max of the three argmax positions.
  std::size_t rank;
  if (!est.wd.empty() && *std::max_element(est.wd.begin(), est.wd.end()) == 1.0) {
    est.rule = RankRule::wd_value_one;
    rank = est.pos_wd;
  } else if (unique_max(est.wr)) {
    est.rule = RankRule::wr_unique_max;
    rank = est.pos_wr;
  } else if (!est.wc.empty() && *std::max_element(est.wc.begin(), est.wc.end()) == 1.0) {
    est.rule = RankRule::wc_value_one;
    rank = est.pos_wc;
  } else if (unique_max(est.wc)) {
    est.rule = RankRule::wc_unique_max;
    rank = est.pos_wc;
  } else {
    est.rule = RankRule::fallback_max;
    rank = std::max({est.pos_wd, est.pos_wr, est.pos_wc});
  }

  est.rank = std::clamp<std::size_t>(rank, 1, L - 1);
  return est;
}

}  // namespace sender
