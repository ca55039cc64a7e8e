#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <vector>

#include "tmac/errors.hpp"

namespace tmac {

// Greedy optimum of the continuous knapsack
//
//   max sum_i w_i u_i   s.t.   0 <= u_i <= caps_i,   sum_i u_i <= budget.
//
// Items are filled in decreasing weight order, ties by lower index. This is
// the closed-form reference for the per-ego structure of the rate LP.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve_fractional_knapsack(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& weights,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& caps, Scalar budget) {
  if (weights.size() != caps.size()) {
    throw DimensionError("fractional knapsack: weights and caps differ in length");
  }
  if (budget < 0 || !(budget == budget)) throw DomainError("fractional knapsack: budget < 0");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights(i) > 0)) throw DomainError("fractional knapsack: weight must be > 0");
    if (!(caps(i) >= 0)) throw DomainError("fractional knapsack: cap must be >= 0");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(weights.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return weights(a) > weights(b); });

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> u =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(weights.size());
  Scalar left = budget;
  for (Eigen::Index i : order) {
    if (left <= 0) break;
    u(i) = std::min(caps(i), left);
    left -= u(i);
  }
  return u;
}

}  // namespace tmac
