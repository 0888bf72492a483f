#include "alsc/segmentation.hpp"

#include "alsc/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace alsc {

SegmentMethod parse_segment_method(std::string_view name) {
  if (name == "otsu") return SegmentMethod::otsu;
  if (name == "pcakm") return SegmentMethod::pcakm;
  throw Error(ErrorKind::invalid_argument, "unknown segmentation method '" + std::string(name) + "'");
}

std::string_view to_string(SegmentMethod method) {
  return method == SegmentMethod::pcakm ? "pcakm" : "otsu";
}

std::size_t ChangeMap::changed() const {
  return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

Mask ChangeMap::to_mask() const {
  Mask mask(width, height);
  mask.data = data;
  return mask;
}

namespace {

void check_finite(const FusedDI& di) {
  if (di.values.size() != di.width * di.height || di.values.empty()) {
    throw Error(ErrorKind::dimension_mismatch, "difference image is empty or malformed");
  }
  for (double v : di.values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::domain, "difference image has non-finite values");
  }
}

ChangeMap empty_map(const FusedDI& di, SegmentMethod method, std::string warning) {
  ChangeMap map;
  map.width = di.width;
  map.height = di.height;
  map.data.assign(di.values.size(), 0);
  map.method = method;
  map.warning = std::move(warning);
  return map;
}

}  // namespace

std::vector<int> gray_levels(const FusedDI& di) {
  const auto [lo, hi] = std::minmax_element(di.values.begin(), di.values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return {};
  std::vector<int> levels(di.values.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    levels[i] = static_cast<int>(std::lround((di.values[i] - *lo) / range * 255.0));
  }
  return levels;
}

ChangeMap otsu_threshold(const FusedDI& di) {
  check_finite(di);
  const std::vector<int> levels = gray_levels(di);
  if (levels.empty()) return empty_map(di, SegmentMethod::otsu, "constant difference image");

  std::array<double, 256> hist{};
  for (int g : levels) hist[static_cast<std::size_t>(g)] += 1.0;
  const double total = static_cast<double>(levels.size());
  double total_sum = 0.0;
  for (std::size_t g = 0; g < 256; ++g) total_sum += static_cast<double>(g) * hist[g];

  int best = -1;
  double best_variance = -1.0;
  double n0 = 0.0, s0 = 0.0;
  for (int t = 0; t < 255; ++t) {
    n0 += hist[static_cast<std::size_t>(t)];
    s0 += t * hist[static_cast<std::size_t>(t)];
    const double n1 = total - n0;
    if (n0 == 0.0 || n1 == 0.0) continue;
    const double gap = s0 / n0 - (total_sum - s0) / n1;
    const double variance = n0 * n1 * gap * gap / (total * total);
    if (variance > best_variance) {
      best_variance = variance;
      best = t;
    }
  }

  ChangeMap map = empty_map(di, SegmentMethod::otsu, {});
  map.threshold = best;
  const auto [lo, hi] = std::minmax_element(di.values.begin(), di.values.end());
  map.threshold_value = *lo + (best + 0.5) / 255.0 * (*hi - *lo);
  for (std::size_t i = 0; i < levels.size(); ++i) map.data[i] = levels[i] > best ? 1 : 0;
  return map;
}

std::vector<double> pcakm_features(const FusedDI& di, const PcakmOptions& options) {
  check_finite(di);
  const std::size_t s = options.block;
  const std::size_t d = options.dims;
  if (s < 2) throw Error(ErrorKind::invalid_argument, "PCAKM block size must be >= 2");
  if (d < 1 || d > s * s) throw Error(ErrorKind::invalid_argument, "PCAKM dims must lie in [1, S^2]");
  if (di.width < s || di.height < s) {
    throw Error(ErrorKind::invalid_argument, "difference image is smaller than one PCAKM block");
  }
  const std::size_t w = di.width, h = di.height, len = s * s;

  // Non-overlapping blocks, zero-padded on the right and bottom.
  const std::size_t brows = (h + s - 1) / s, bcols = (w + s - 1) / s;
  Eigen::MatrixXd blocks(static_cast<Eigen::Index>(brows * bcols), static_cast<Eigen::Index>(len));
  for (std::size_t br = 0; br < brows; ++br) {
    for (std::size_t bc = 0; bc < bcols; ++bc) {
      const auto row = static_cast<Eigen::Index>(br * bcols + bc);
      for (std::size_t r = 0; r < s; ++r) {
        for (std::size_t c = 0; c < s; ++c) {
          const std::size_t y = br * s + r, x = bc * s + c;
          blocks(row, static_cast<Eigen::Index>(r * s + c)) =
              (y < h && x < w) ? di.values[y * w + x] : 0.0;
        }
      }
    }
  }
  const Eigen::RowVectorXd mean = blocks.colwise().mean();
  const Eigen::MatrixXd centered = blocks.rowwise() - mean;
  const Eigen::MatrixXd covariance = centered.transpose() * centered / static_cast<double>(blocks.rows());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::domain, "PCAKM eigendecomposition failed");
  }

  // Eigenvalues come ascending; keep the last d, largest first. Sign is fixed
  // so the largest-magnitude component is positive.
  Eigen::MatrixXd axes(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(len - 1 - k));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    axes.col(static_cast<Eigen::Index>(k)) = v;
  }

  const long half = static_cast<long>(s / 2);
  std::vector<double> features(w * h * d);
  Eigen::VectorXd patch(static_cast<Eigen::Index>(len));
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t r = 0; r < s; ++r) {
        const long yy = std::clamp(static_cast<long>(y) + static_cast<long>(r) - half, 0L,
                                   static_cast<long>(h) - 1);
        for (std::size_t c = 0; c < s; ++c) {
          const long xx = std::clamp(static_cast<long>(x) + static_cast<long>(c) - half, 0L,
                                     static_cast<long>(w) - 1);
          patch(static_cast<Eigen::Index>(r * s + c)) =
              di.values[static_cast<std::size_t>(yy) * w + static_cast<std::size_t>(xx)] -
              mean(static_cast<Eigen::Index>(r * s + c));
        }
      }
      const Eigen::VectorXd projected = axes.transpose() * patch;
      for (std::size_t k = 0; k < d; ++k) {
        features[(y * w + x) * d + k] = projected(static_cast<Eigen::Index>(k));
      }
    }
  }
  return features;
}

namespace {

double squared_distance(const double* a, const double* b, std::size_t dims) {
  double sum = 0.0;
  for (std::size_t k = 0; k < dims; ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return sum;
}

std::size_t farthest_from(const std::vector<double>& features, std::size_t dims,
                          const double* ref) {
  const std::size_t n = features.size() / dims;
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = squared_distance(&features[i * dims], ref, dims);
    if (d > best) {
      best = d;
      arg = i;
    }
  }
  return arg;
}

}  // namespace

TwoMeans two_means(const std::vector<double>& features, std::size_t dims,
                   std::size_t max_iterations, bool swap_seeds) {
  if (dims == 0 || features.empty() || features.size() % dims != 0) {
    throw Error(ErrorKind::invalid_argument, "feature matrix shape is invalid");
  }
  const std::size_t n = features.size() / dims;
  TwoMeans out;
  out.assignment.assign(n, 0);

  std::vector<double> mean(dims, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dims; ++k) mean[k] += features[i * dims + k];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  const std::size_t seed_a = farthest_from(features, dims, mean.data());
  const std::size_t seed_b = farthest_from(features, dims, &features[seed_a * dims]);
  if (squared_distance(&features[seed_a * dims], &features[seed_b * dims], dims) == 0.0) {
    out.degenerate = true;
    return out;
  }

  std::array<std::vector<double>, 2> centers;
  centers[0].assign(features.begin() + static_cast<std::ptrdiff_t>(seed_a * dims),
                    features.begin() + static_cast<std::ptrdiff_t>((seed_a + 1) * dims));
  centers[1].assign(features.begin() + static_cast<std::ptrdiff_t>(seed_b * dims),
                    features.begin() + static_cast<std::ptrdiff_t>((seed_b + 1) * dims));
  if (swap_seeds) std::swap(centers[0], centers[1]);

  bool first = true;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = squared_distance(&features[i * dims], centers[0].data(), dims);
      const double d1 = squared_distance(&features[i * dims], centers[1].data(), dims);
      const std::uint8_t label = d1 < d0 ? 1 : 0;
      if (first || label != out.assignment[i]) changed = true;
      out.assignment[i] = label;
    }
    out.iterations = iter + 1;
    if (!changed) break;
    first = false;

    std::array<std::vector<double>, 2> sums{std::vector<double>(dims, 0.0),
                                            std::vector<double>(dims, 0.0)};
    std::array<std::size_t, 2> counts{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t label = out.assignment[i];
      ++counts[label];
      for (std::size_t k = 0; k < dims; ++k) sums[label][k] += features[i * dims + k];
    }
    for (std::size_t c = 0; c < 2; ++c) {
      if (counts[c] == 0) continue;  // keep the previous center
      for (std::size_t k = 0; k < dims; ++k) {
        centers[c][k] = sums[c][k] / static_cast<double>(counts[c]);
      }
    }
  }
  return out;
}

ChangeMap label_clusters(const FusedDI& di, const TwoMeans& clusters) {
  if (clusters.assignment.size() != di.values.size()) {
    throw Error(ErrorKind::dimension_mismatch, "cluster assignment does not match the DI");
  }
  if (clusters.degenerate) return empty_map(di, SegmentMethod::pcakm, "degenerate clustering");
  std::array<double, 2> sums{0.0, 0.0};
  std::array<std::size_t, 2> counts{0, 0};
  for (std::size_t i = 0; i < di.values.size(); ++i) {
    sums[clusters.assignment[i]] += di.values[i];
    ++counts[clusters.assignment[i]];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    return empty_map(di, SegmentMethod::pcakm, "k-means produced a single cluster");
  }
  const double mean0 = sums[0] / static_cast<double>(counts[0]);
  const double mean1 = sums[1] / static_cast<double>(counts[1]);
  if (mean0 == mean1) return empty_map(di, SegmentMethod::pcakm, "clusters have equal mean DI");
  const std::uint8_t changed_id = mean1 > mean0 ? 1 : 0;

  ChangeMap map = empty_map(di, SegmentMethod::pcakm, {});
  for (std::size_t i = 0; i < di.values.size(); ++i) {
    map.data[i] = clusters.assignment[i] == changed_id ? 1 : 0;
  }
  return map;
}

ChangeMap pcakm_segment(const FusedDI& di, const PcakmOptions& options) {
  check_finite(di);
  const auto [lo, hi] = std::minmax_element(di.values.begin(), di.values.end());
  if (!(*hi > *lo)) {
    if (di.width < options.block || di.height < options.block) {
      throw Error(ErrorKind::invalid_argument, "difference image is smaller than one PCAKM block");
    }
    return empty_map(di, SegmentMethod::pcakm, "constant difference image");
  }
  const std::vector<double> features = pcakm_features(di, options);
  return label_clusters(di, two_means(features, options.dims, options.max_iterations));
}

}  // namespace alsc
