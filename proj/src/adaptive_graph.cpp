#include "alsc/adaptive_graph.hpp"

#include "alsc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace alsc {

namespace {

void check_inputs(std::span<const double> distances, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::invalid_argument, "K must be >= 1");
  if (distances.size() <= k) {
    throw Error(ErrorKind::invalid_argument,
                "need at least K+1 = " + std::to_string(k + 1) + " distances, got " +
                    std::to_string(distances.size()));
  }
  for (double d : distances) {
    if (!std::isfinite(d) || d < 0.0) {
      throw Error(ErrorKind::domain, "distances must be finite and nonnegative");
    }
  }
}

// Indices of the K+1 smallest distances, ordered by (distance, index). This is
// the prefix a stable ascending sort would produce.
std::vector<std::size_t> smallest_k_plus_one(std::span<const double> distances, std::size_t k) {
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto by_distance = [&](std::size_t a, std::size_t b) {
    return distances[a] < distances[b] || (distances[a] == distances[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k + 1), order.end(),
                    by_distance);
  order.resize(k + 1);
  return order;
}

}  // namespace

NeighborGraph solve_simplex(std::span<const double> distances, std::size_t k) {
  check_inputs(distances, k);
  const std::vector<std::size_t> order = smallest_k_plus_one(distances, k);

  const double next = distances[order[k]];
  double head_sum = 0.0;
  for (std::size_t h = 0; h < k; ++h) head_sum += distances[order[h]];
  const double denominator = static_cast<double>(k) * next - head_sum;

  NeighborGraph graph;
  graph.ranked_index.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  graph.weights.resize(k);
  if (denominator <= kDegenerateDenominator) {
    graph.uniform_fallback = true;
    std::fill(graph.weights.begin(), graph.weights.end(), 1.0 / static_cast<double>(k));
    return graph;
  }
  for (std::size_t h = 0; h < k; ++h) {
    graph.weights[h] = (next - distances[order[h]]) / denominator;
  }
  return graph;
}

double gamma_of_k(std::span<const double> distances, std::size_t k) {
  check_inputs(distances, k);
  const std::vector<std::size_t> order = smallest_k_plus_one(distances, k);
  double head_sum = 0.0;
  for (std::size_t h = 0; h < k; ++h) head_sum += distances[order[h]];
  return 0.5 * static_cast<double>(k) * distances[order[k]] - 0.5 * head_sum;
}

std::vector<double> to_dense(const NeighborGraph& graph, std::size_t n) {
  std::vector<double> dense(n, 0.0);
  for (std::size_t h = 0; h < graph.size(); ++h) dense.at(graph.ranked_index[h]) = graph.weights[h];
  return dense;
}

}  // namespace alsc
