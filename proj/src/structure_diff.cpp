#include "alsc/structure_diff.hpp"

#include "alsc/error.hpp"

#include <algorithm>
#include <string>

namespace alsc {

StructureScorer::StructureScorer(const Raster& x, const Raster& y, const PatchParams& params)
    : dist_x_(x, params.half_width), dist_y_(y, params.half_width), params_(params),
      width_(x.width), height_(x.height) {
  params_.validate();
  if (x.width != y.width || x.height != y.height) {
    throw Error(ErrorKind::dimension_mismatch,
                "image pair differs in size: " + std::to_string(x.width) + "x" +
                    std::to_string(x.height) + " vs " + std::to_string(y.width) + "x" +
                    std::to_string(y.height));
  }
}

StructureScorePair StructureScorer::score(const PatchRef& target) const {
  if (!patch_fits(target, width_, height_, params_.half_width)) {
    throw Error(ErrorKind::invalid_argument, "target patch exceeds the image");
  }
  // One candidate geometry for both images keeps rank indices comparable.
  const NeighborSet neighbors = candidate_lattice(target, width_, height_, params_);
  if (neighbors.size() < 2) {
    throw Error(ErrorKind::invalid_argument,
                "search window around (" + std::to_string(target.row) + ", " +
                    std::to_string(target.col) + ") holds fewer than two candidates");
  }
  const std::size_t k = std::min(params_.neighbors, neighbors.size() - 1);

  const std::vector<double> dx = distance_vector(dist_x_, neighbors);
  const std::vector<double> dy = distance_vector(dist_y_, neighbors);
  const NeighborGraph graph_x = solve_simplex(dx, k);
  const NeighborGraph graph_y = solve_simplex(dy, k);

  const auto& cand = neighbors.candidates;
  StructureScorePair out;
  out.target = target;
  out.effective_k = k;
  out.k_clamped = k < params_.neighbors;
  out.fallback_graphs = int{graph_x.uniform_fallback} + int{graph_y.uniform_fallback};
  out.forward = projected_difference(
      graph_x, graph_y, [&](std::size_t ix, std::size_t iy) { return dist_y_(cand[iy], cand[ix]); });
  out.backward = projected_difference(
      graph_y, graph_x, [&](std::size_t iy, std::size_t ix) { return dist_x_(cand[iy], cand[ix]); });
  return out;
}

StructureScorePair structure_difference(const Raster& x, const Raster& y, const PatchRef& target,
                                        const PatchParams& params) {
  return StructureScorer(x, y, params).score(target);
}

}  // namespace alsc
