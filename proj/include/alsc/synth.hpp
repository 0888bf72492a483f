#pragma once

#include "alsc/raster.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace alsc {

/// Portable random source. mt19937_64 has a fixed output sequence in every
/// standard library, but the std distributions do not, so the variates below
/// are computed by hand:
///   uniform  (bits >> 11) * 2^-53
///   normal   Box-Muller, both outputs used in order
///   gamma    Marsaglia-Tsang (shape >= 1)
/// Independent streams are seeded with SplitMix64(seed + stream).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n);
  double normal();
  double gamma(double shape, double scale);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

struct SceneSpec {
  std::size_t width = 128;
  std::size_t height = 128;
  std::uint64_t seed = 0;
  std::size_t n_classes = 4;
  double change_fraction = 0.08;
  std::size_t speckle_looks = 4;

  void validate() const;
};

/// A coregistered optical (pre-event) / SAR (post-event) pair with ground truth.
struct SyntheticScene {
  Raster optical;  // 3 bands in [0, 1]
  Raster sar;      // 1 band, >= kSarFloor
  Mask truth;
  std::vector<int> pre_labels;
  std::vector<int> post_labels;
  std::vector<std::array<double, 3>> optical_means;  // per label
  std::vector<double> reflectivity;                  // per label
};

inline constexpr double kOpticalNoiseSigma = 0.05;
inline constexpr std::size_t kMaxRelabelAttempts = 1000;

/// Pre-event labels: one label per random rectangle/ellipse over a background
/// (n_classes + 1 labels). Post-event labels: random regions are re-labeled to
/// another existing class until the changed fraction lies within 20% of the
/// request. Class levels are stratified so every pair of labels differs in
/// both modalities. Fully determined by spec.seed.
SyntheticScene generate(const SceneSpec& spec);

}  // namespace alsc
