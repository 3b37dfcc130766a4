#include "sender/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sender/activation.hpp"

namespace sender {

double reconstruction_error(const Matrix& input, const Decomposition& d, Activation act) {
  const double denom = frob_norm(input);
  if (denom == 0.0) throw MetricError("reconstruction_error: zero input norm");
  const Matrix r = reconstruct(d, input.rows(), act);
  return frob_norm(input - r) / denom;
}

double icc(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw MetricError("icc: length mismatch");
  if (n < 2) throw MetricError("icc: needs at least 2 observations");

  const double kk = 2.0;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double gm = (sx + sy) / (kk * static_cast<double>(n));
  const double cmx = sx / static_cast<double>(n);
  const double cmy = sy / static_cast<double>(n);

  double ssr = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rm = (x[i] + y[i]) / 2.0;
    ssr += (rm - gm) * (rm - gm);
    sst += (x[i] - gm) * (x[i] - gm) + (y[i] - gm) * (y[i] - gm);
  }
  ssr *= kk;
  const double ssc = static_cast<double>(n) * ((cmx - gm) * (cmx - gm) + (cmy - gm) * (cmy - gm));
  const double sse = std::max(sst - ssr - ssc, 0.0);

  const double msr = ssr / static_cast<double>(n - 1);
  const double msc = ssc / (kk - 1.0);
  const double mse = sse / static_cast<double>(n - 1) / (kk - 1.0);

  const double den = msr + (kk - 1.0) * mse + (kk / static_cast<double>(n)) * (msc - mse);
  if (den == 0.0) throw MetricError("icc: degenerate variance (both series constant)");
  return (msr - mse) / den;
}

double identifiability(const ComponentSet& test, const ComponentSet& retest) {
  if (test.components.empty() || retest.components.empty())
    throw MetricError("identifiability: empty component set");
  const std::size_t q = test.components.front().size();
  for (const auto& c : test.components)
    if (c.size() != q) throw MetricError("identifiability: component length mismatch");
  for (const auto& c : retest.components)
    if (c.size() != q) throw MetricError("identifiability: component length mismatch");

  double sum = 0.0;
  for (const auto& a : test.components)
    for (const auto& b : retest.components) sum += icc(a, b);
  return sum / (static_cast<double>(test.components.size()) *
                static_cast<double>(retest.components.size()));
}

double matched_identifiability(const ComponentSet& test, const ComponentSet& retest) {
  if (test.components.empty() || retest.components.empty())
    throw MetricError("matched_identifiability: empty component set");
  const std::size_t na = test.components.size(), nb = retest.components.size();
  std::vector<std::vector<double>> score(na, std::vector<double>(nb, 0.0));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      score[i][j] = std::fabs(icc(test.components[i], retest.components[j]));

  const std::size_t m = std::min(na, nb);
  std::vector<bool> used_a(na, false), used_b(nb, false);
  double total = 0.0;
  for (std::size_t step = 0; step < m; ++step) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < na; ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < nb; ++j) {
        if (used_b[j]) continue;
        if (score[i][j] > best) {
          best = score[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = true;
    used_b[bj] = true;
    total += best;
  }
  return total / static_cast<double>(m);
}

PointSet threshold_to_pointset(const std::vector<double>& component, double thresh) {
  PointSet ps;
  for (std::size_t i = 0; i < component.size(); ++i)
    if (component[i] > thresh) ps.points.push_back(static_cast<long long>(i));
  return ps;
}

double hausdorff(const PointSet& a, const PointSet& b) {
  if (a.points.empty() || b.points.empty())
    throw MetricError("hausdorff: empty point set");
  // Sorted inputs allow a linear merge for each directed distance.
  auto directed = [](const std::vector<long long>& from, const std::vector<long long>& to) {
    double worst = 0.0;
    std::size_t j = 0;
    for (long long p : from) {
      while (j + 1 < to.size() &&
             std::llabs(to[j + 1] - p) <= std::llabs(to[j] - p))
        ++j;
      // j may need to move back for the next p only if `from` were unsorted;
      // both sets are sorted so the pointer only advances.
      double best = static_cast<double>(std::llabs(to[j] - p));
      if (j > 0)
        best = std::min(best, static_cast<double>(std::llabs(to[j - 1] - p)));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a.points, b.points), directed(b.points, a.points));
}

}  // namespace sender
