#pragma once

#include "alsc/adaptive_graph.hpp"
#include "alsc/distance.hpp"
#include "alsc/patch.hpp"
#include "alsc/raster.hpp"

#include <cstddef>

namespace alsc {

/// Forward score uses Y-domain distances weighted by the X graph; backward uses
/// X-domain distances weighted by the Y graph.
struct StructureScorePair {
  PatchRef target;
  double forward = 0.0;
  double backward = 0.0;
  std::size_t effective_k = 0;
  bool k_clamped = false;
  int fallback_graphs = 0;  // graphs (0..2) that hit the uniform fallback
};

/// Sum over ranks h of  cross(own.ranked_index[h], other.ranked_index[h]) * own.weights[h].
/// `cross(i, j)` must return the distance between candidates i and j in the
/// domain that owns the `other` graph. Equal indices contribute nothing.
template <typename CrossDistance>
double projected_difference(const NeighborGraph& own, const NeighborGraph& other,
                            CrossDistance&& cross) {
  double sum = 0.0;
  for (std::size_t h = 0; h < own.size(); ++h) {
    const std::size_t i = own.ranked_index[h];
    const std::size_t j = other.ranked_index[h];
    if (i == j) continue;
    sum += cross(i, j) * own.weights[h];
  }
  return sum;
}

/// Scores target patches of a coregistered pair. Holds references to both
/// rasters; they must outlive the scorer.
class StructureScorer {
 public:
  StructureScorer(const Raster& x, const Raster& y, const PatchParams& params);

  /// Throws when the window around `target` holds fewer than two candidates.
  StructureScorePair score(const PatchRef& target) const;

  const PatchParams& params() const noexcept { return params_; }

 private:
  PatchDistance dist_x_;
  PatchDistance dist_y_;
  PatchParams params_;
  std::size_t width_;
  std::size_t height_;
};

StructureScorePair structure_difference(const Raster& x, const Raster& y, const PatchRef& target,
                                        const PatchParams& params);

}  // namespace alsc
