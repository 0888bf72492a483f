#include "alsc/metrics.hpp"

#include "alsc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace alsc {

namespace {

void check_dims(std::size_t w, std::size_t h, const Mask& truth) {
  if (w != truth.width || h != truth.height) {
    throw Error(ErrorKind::dimension_mismatch,
                "prediction is " + std::to_string(w) + "x" + std::to_string(h) +
                    " but ground truth is " + std::to_string(truth.width) + "x" +
                    std::to_string(truth.height));
  }
}

ConfusionCounts count(const std::vector<std::uint8_t>& predicted, const Mask& truth) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] != 0;
    const bool t = truth.data[i] != 0;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace

ConfusionCounts confusion(const ChangeMap& map, const Mask& truth) {
  check_dims(map.width, map.height, truth);
  return count(map.data, truth);
}

ConfusionCounts confusion(const Mask& predicted, const Mask& truth) {
  check_dims(predicted.width, predicted.height, truth);
  return count(predicted.data, truth);
}

Rates rates(const ConfusionCounts& c) {
  const std::uint64_t total = c.total();
  if (total == 0) throw Error(ErrorKind::invalid_argument, "confusion counts are empty");
  const double n = static_cast<double>(total);
  Rates r;
  r.fp_rate = static_cast<double>(c.fp) / n;
  r.fn_rate = static_cast<double>(c.fn) / n;
  r.oa = static_cast<double>(c.tp + c.tn) / n;
  const double predicted_pos = static_cast<double>(c.tp + c.fp);
  const double actual_pos = static_cast<double>(c.tp + c.fn);
  const double predicted_neg = static_cast<double>(c.tn + c.fn);
  const double actual_neg = static_cast<double>(c.tn + c.fp);
  const double pe = (predicted_pos * actual_pos + predicted_neg * actual_neg) / (n * n);
  r.kappa = pe >= 1.0 ? 0.0 : (r.oa - pe) / (1.0 - pe);
  return r;
}

RocCurve roc(std::span<const double> values, const Mask& truth) {
  if (values.size() != truth.data.size()) {
    throw Error(ErrorKind::dimension_mismatch, "DI and ground truth differ in size");
  }
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < values.size(); ++i) {
    (truth.data[i] ? pos : neg).push_back(values[i]);
  }
  if (pos.empty() || neg.empty()) {
    throw Error(ErrorKind::invalid_argument, "ROC needs both changed and unchanged pixels in truth");
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  std::vector<double> unique(values.begin(), values.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  std::vector<double> thresholds;
  if (unique.size() <= kRocMaxThresholds) {
    thresholds = unique;
  } else {
    thresholds.reserve(kRocMaxThresholds);
    const std::size_t last = unique.size() - 1;
    for (std::size_t q = 0; q < kRocMaxThresholds; ++q) {
      thresholds.push_back(unique[q * last / (kRocMaxThresholds - 1)]);
    }
    // The minimum is always kept so the curve reaches (1, 1) exactly.
  }

  const auto at_or_above = [](const std::vector<double>& sorted, double t) {
    return static_cast<double>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t));
  };
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());

  RocCurve curve;
  curve.points.reserve(thresholds.size() + 1);
  for (double t : thresholds) {
    curve.points.push_back({t, at_or_above(neg, t) / nn, at_or_above(pos, t) / np});
  }
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});

  double auc = 0.0;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i];
    const RocPoint& b = curve.points[i + 1];
    auc += (a.fpr - b.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  curve.auc = auc;
  return curve;
}

RocCurve roc(const FusedDI& di, const Mask& truth) {
  if (di.width != truth.width || di.height != truth.height) {
    throw Error(ErrorKind::dimension_mismatch, "DI and ground truth differ in size");
  }
  return roc(di.values, truth);
}

}  // namespace alsc
