#pragma once

#include "alsc/patch.hpp"
#include "alsc/raster.hpp"
#include "alsc/structure_diff.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace alsc {

/// Per-pixel running mean of the structure scores of every patch covering the
/// pixel. Kept as (sum, count); values() materializes the mean.
struct DifferenceImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> sum;
  std::vector<std::uint32_t> count;

  DifferenceImage() = default;
  DifferenceImage(std::size_t width, std::size_t height)
      : width(width), height(height), sum(width * height, 0.0), count(width * height, 0) {}

  /// sum / count per pixel; uncovered pixels read as 0.
  std::vector<double> values() const;
  bool fully_covered() const;
};

/// Adds `score` to every pixel of the target's (2p+1)^2 footprint.
void accumulate(DifferenceImage& di, const PatchRef& target, std::size_t half_width, double score);

/// Normalized sum of the two directional images, each divided by its mean
/// over all pixels. Degenerate when either image has zero mean; the values are
/// then all zero.
struct FusedDI {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;
  bool degenerate = false;
};

FusedDI fuse(const DifferenceImage& backward, const DifferenceImage& forward);

struct AlscResult {
  FusedDI fused;
  DifferenceImage forward;   // Y domain, weighted by the X graphs
  DifferenceImage backward;  // X domain, weighted by the Y graphs
  std::size_t targets = 0;
  std::size_t clamped_targets = 0;
  std::size_t fallback_graphs = 0;
};

/// Full difference-image pipeline for a coregistered pair. Target scores are
/// computed by `workers` threads (0 = hardware concurrency) and accumulated
/// in grid order, so the result does not depend on the worker count.
AlscResult run_alsc(const Raster& x, const Raster& y, const PatchParams& params,
                    std::size_t workers = 1);

/// Wraps fused values as a single-band raster for output.
Raster to_raster(const FusedDI& di);
Raster to_raster(const DifferenceImage& di);

}  // namespace alsc
