#pragma once

#include "alsc/difference_image.hpp"
#include "alsc/raster.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace alsc {

enum class SegmentMethod { otsu, pcakm };

SegmentMethod parse_segment_method(std::string_view name);
std::string_view to_string(SegmentMethod method);

struct ChangeMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> data;  // 1 = changed
  SegmentMethod method = SegmentMethod::otsu;
  /// Otsu only: chosen 8-bit gray level (changed iff level > threshold), and
  /// the same cut expressed in DI units.
  int threshold = -1;
  double threshold_value = 0.0;
  /// Set when the input carries no usable contrast; the map is then all zero.
  std::string warning;

  std::size_t changed() const;
  Mask to_mask() const;
};

/// Min-max scales the DI onto 0..255 (rounded to the nearest level), builds a
/// 256-bin histogram and picks the level maximizing between-class variance,
/// preferring the lowest level on ties. Pixels strictly above it are changed.
ChangeMap otsu_threshold(const FusedDI& di);

/// 8-bit levels used by otsu_threshold; empty when the DI is constant.
std::vector<int> gray_levels(const FusedDI& di);

struct PcakmOptions {
  std::size_t block = 4;
  std::size_t dims = 3;
  std::size_t max_iterations = 100;
};

/// Row-major pixel features (pixels x dims): each pixel's block x block
/// neighborhood (edge-replicated), centered on the mean block vector and
/// projected on the leading principal axes of the non-overlapping blocks.
std::vector<double> pcakm_features(const FusedDI& di, const PcakmOptions& options);

struct TwoMeans {
  std::vector<std::uint8_t> assignment;  // cluster id per sample, 0 or 1
  std::size_t iterations = 0;
  bool degenerate = false;
};

/// Deterministic 2-means. Seeds: the sample farthest from the overall mean,
/// then the sample farthest from that one (lowest index on ties). Iterates
/// until assignments stop changing or max_iterations is reached.
TwoMeans two_means(const std::vector<double>& features, std::size_t dims,
                   std::size_t max_iterations, bool swap_seeds = false);

/// Labels the cluster with the larger mean DI value as changed.
ChangeMap label_clusters(const FusedDI& di, const TwoMeans& clusters);

/// PCA + k-means change map.
ChangeMap pcakm_segment(const FusedDI& di, const PcakmOptions& options = {});

}  // namespace alsc
