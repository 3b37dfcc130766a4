#pragma once

#include <vector>

#include "sender/decompose.hpp"

namespace sender {

class MetricError : public std::runtime_error {
 public:
  explicit MetricError(const std::string& msg) : std::runtime_error(msg) {}
};

// ||I - psi y_M - (prod u) act(v_M) - sum s_k||_F / ||I||_F
double reconstruction_error(const Matrix& input, const Decomposition& d, Activation act);

// ICC(2,1): two-way random effects, absolute agreement, single rater, over the
// n x 2 table [x y].
double icc(const std::vector<double>& x, const std::vector<double>& y);

struct ComponentSet {
  std::vector<std::vector<double>> components;
  std::vector<std::string> labels;
};

// Mean pairwise ICC over all (test, retest) pairs.
double identifiability(const ComponentSet& test, const ComponentSet& retest);

// Greedy best-|ICC| matching, mean over matched pairs; used by the
// test/retest pipeline where component order and sign are arbitrary.
double matched_identifiability(const ComponentSet& test, const ComponentSet& retest);

struct PointSet {
  std::vector<long long> points;  // unique, sorted indices
};

PointSet threshold_to_pointset(const std::vector<double>& component, double thresh);

// Symmetric Hausdorff distance on 1-D index sets.
double hausdorff(const PointSet& a, const PointSet& b);

}  // namespace sender
