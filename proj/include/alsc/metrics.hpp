#pragma once

#include "alsc/difference_image.hpp"
#include "alsc/raster.hpp"
#include "alsc/segmentation.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace alsc {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(const ChangeMap& map, const Mask& truth);
ConfusionCounts confusion(const Mask& predicted, const Mask& truth);

/// FP and FN are fractions of all pixels, not of the class sizes.
struct Rates {
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  double oa = 0.0;
  double kappa = 0.0;
};

/// Cohen's kappa is reported as 0 when the chance agreement equals 1.
Rates rates(const ConfusionCounts& counts);

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

/// Points ordered by ascending threshold (a pixel is called changed when its
/// value is >= threshold), bracketed by (1,1) at the low end and (0,0) at +inf.
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Threshold sweep cap; larger sets of distinct values are subsampled to this
/// many evenly spaced order statistics.
inline constexpr std::size_t kRocMaxThresholds = 512;

RocCurve roc(std::span<const double> values, const Mask& truth);
RocCurve roc(const FusedDI& di, const Mask& truth);

}  // namespace alsc
