#include "alsc/difference_image.hpp"

#include "alsc/error.hpp"
#include "alsc/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace alsc {

std::vector<double> DifferenceImage::values() const {
  std::vector<double> out(sum.size(), 0.0);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (count[i] > 0) out[i] = sum[i] / static_cast<double>(count[i]);
  }
  return out;
}

bool DifferenceImage::fully_covered() const {
  return std::all_of(count.begin(), count.end(), [](std::uint32_t c) { return c > 0; });
}

void accumulate(DifferenceImage& di, const PatchRef& target, std::size_t half_width, double score) {
  if (!patch_fits(target, di.width, di.height, half_width)) {
    throw Error(ErrorKind::invalid_argument, "patch footprint exceeds the difference image");
  }
  for (std::size_t r = target.row - half_width; r <= target.row + half_width; ++r) {
    const std::size_t base = r * di.width;
    for (std::size_t c = target.col - half_width; c <= target.col + half_width; ++c) {
      di.sum[base + c] += score;
      di.count[base + c] += 1;
    }
  }
}

FusedDI fuse(const DifferenceImage& backward, const DifferenceImage& forward) {
  if (backward.width != forward.width || backward.height != forward.height) {
    throw Error(ErrorKind::dimension_mismatch, "difference images differ in size");
  }
  FusedDI fused;
  fused.width = forward.width;
  fused.height = forward.height;
  const std::vector<double> bx = backward.values();
  const std::vector<double> fy = forward.values();
  const double n = static_cast<double>(bx.size());
  const double mean_x = std::accumulate(bx.begin(), bx.end(), 0.0) / n;
  const double mean_y = std::accumulate(fy.begin(), fy.end(), 0.0) / n;
  fused.values.assign(bx.size(), 0.0);
  if (!(mean_x > 0.0) || !(mean_y > 0.0)) {
    fused.degenerate = true;
    return fused;
  }
  for (std::size_t i = 0; i < bx.size(); ++i) fused.values[i] = bx[i] / mean_x + fy[i] / mean_y;
  return fused;
}

AlscResult run_alsc(const Raster& x, const Raster& y, const PatchParams& params,
                    std::size_t workers) {
  const StructureScorer scorer(x, y, params);
  const std::vector<PatchRef> grid = target_grid(x.width, x.height, params);

  std::vector<StructureScorePair> scores(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) { scores[i] = scorer.score(grid[i]); });

  AlscResult result;
  result.forward = DifferenceImage(x.width, x.height);
  result.backward = DifferenceImage(x.width, x.height);
  result.targets = grid.size();
  for (const StructureScorePair& s : scores) {
    accumulate(result.forward, s.target, params.half_width, s.forward);
    accumulate(result.backward, s.target, params.half_width, s.backward);
    result.clamped_targets += s.k_clamped ? 1 : 0;
    result.fallback_graphs += static_cast<std::size_t>(s.fallback_graphs);
  }
  result.fused = fuse(result.backward, result.forward);
  return result;
}

Raster to_raster(const FusedDI& di) {
  Raster out(di.width, di.height, 1, Modality::optical);
  out.data = di.values;
  return out;
}

Raster to_raster(const DifferenceImage& di) {
  Raster out(di.width, di.height, 1, Modality::optical);
  out.data = di.values();
  return out;
}

}  // namespace alsc
