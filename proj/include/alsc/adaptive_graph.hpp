#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace alsc {

/// Sparse probabilistic K-NN graph of one target patch.
///
/// ranked_index[h] is the position (into the candidate list) of the (h+1)-th
/// nearest candidate; weights[h] is its probability. Weights lie on the unit
/// simplex and are non-increasing in h. Candidates beyond rank K carry zero
/// weight and are not stored.
struct NeighborGraph {
  std::vector<std::size_t> ranked_index;
  std::vector<double> weights;
  bool uniform_fallback = false;

  std::size_t size() const noexcept { return weights.size(); }
};

/// Denominators at or below this are treated as degenerate (d(1) = ... = d(K+1)).
inline constexpr double kDegenerateDenominator = 1e-12;

/// Closed-form minimizer of  sum_j d_j s_j + gamma s_j^2  over the probability
/// simplex, parameterized by the neighbor count K instead of gamma:
///
///   s(h) = (d(K+1) - d(h)) / (K d(K+1) - sum_{r<=K} d(r))   for h <= K,
///
/// where d(h) is the h-th smallest distance. Sorting is stable (ties resolve to
/// the lower candidate index). A degenerate denominator yields uniform 1/K
/// weights over the K nearest candidates.
///
/// Requires distances.size() >= K + 1 and K >= 1.
NeighborGraph solve_simplex(std::span<const double> distances, std::size_t k);

/// The regularization weight gamma that makes the K-parameterized solution the
/// exact minimizer:  gamma = (K/2) d(K+1) - (1/2) sum_{r<=K} d(r).
double gamma_of_k(std::span<const double> distances, std::size_t k);

/// Dense form of a graph over n candidates (zeros off the support).
std::vector<double> to_dense(const NeighborGraph& graph, std::size_t n);

}  // namespace alsc
