#include "alsc/synth.hpp"

#include "alsc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace alsc {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed + stream)) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double Rng::gamma(double shape, double scale) {
  if (shape < 1.0) throw Error(ErrorKind::invalid_argument, "gamma shape must be >= 1");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v * scale;
  }
}

void SceneSpec::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorKind::invalid_argument, what); };
  if (width < 8 || height < 8) fail("synthetic scene must be at least 8x8");
  if (n_classes < 1) fail("n_classes must be >= 1");
  if (!(change_fraction > 0.0 && change_fraction < 0.5)) fail("change_fraction must lie in (0, 0.5)");
  if (speckle_looks < 1) fail("speckle_looks must be >= 1");
}

namespace {

enum Stream : std::uint64_t { kLabels = 1, kChange = 2, kOpticalNoise = 3, kSpeckle = 4, kRadiometry = 5 };

struct Shape {
  bool ellipse = false;
  double cy = 0.0, cx = 0.0, ry = 1.0, rx = 1.0;

  bool contains(double y, double x) const {
    const double dy = (y - cy) / ry, dx = (x - cx) / rx;
    return ellipse ? dy * dy + dx * dx <= 1.0 : std::abs(dy) <= 1.0 && std::abs(dx) <= 1.0;
  }
};

void paint(std::vector<int>& labels, std::size_t width, std::size_t height, const Shape& shape,
           int label) {
  const auto y0 = static_cast<std::size_t>(std::max(0.0, std::floor(shape.cy - shape.ry)));
  const auto y1 = static_cast<std::size_t>(
      std::clamp(std::ceil(shape.cy + shape.ry), 0.0, static_cast<double>(height - 1)));
  const auto x0 = static_cast<std::size_t>(std::max(0.0, std::floor(shape.cx - shape.rx)));
  const auto x1 = static_cast<std::size_t>(
      std::clamp(std::ceil(shape.cx + shape.rx), 0.0, static_cast<double>(width - 1)));
  for (std::size_t y = y0; y <= y1 && y < height; ++y) {
    for (std::size_t x = x0; x <= x1 && x < width; ++x) {
      if (shape.contains(static_cast<double>(y), static_cast<double>(x))) labels[y * width + x] = label;
    }
  }
}

// Shape of roughly `area` pixels with aspect ratio in [1/2, 2].
Shape random_shape(Rng& rng, std::size_t width, std::size_t height, double area) {
  Shape s;
  s.ellipse = rng.uniform() < 0.5;
  const double aspect = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
  const double base = s.ellipse ? std::numbers::pi : 4.0;
  s.ry = std::max(1.0, std::sqrt(area / (base * aspect)));
  s.rx = std::max(1.0, aspect * s.ry);
  s.cy = rng.uniform(0.0, static_cast<double>(height - 1));
  s.cx = rng.uniform(0.0, static_cast<double>(width - 1));
  return s;
}

// One value per label on `count` evenly spaced levels spanning [lo, hi]
// (geometric spacing when log_scale), assigned by random permutation and
// jittered by at most a tenth of the spacing. Distinct labels stay separable.
std::vector<double> stratified_levels(Rng& rng, std::size_t count, double lo, double hi,
                                      bool log_scale) {
  std::vector<std::size_t> perm(count);
  for (std::size_t i = 0; i < count; ++i) perm[i] = i;
  for (std::size_t i = count; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  const double spacing = count > 1 ? 1.0 / static_cast<double>(count - 1) : 0.0;
  std::vector<double> levels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double jitter = rng.uniform(-0.1, 0.1) * spacing;
    const double t = count > 1 ? std::clamp(static_cast<double>(perm[i]) * spacing + jitter, 0.0, 1.0)
                               : 0.5;
    levels[i] = log_scale ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  return levels;
}

}  // namespace

SyntheticScene generate(const SceneSpec& spec) {
  spec.validate();
  const std::size_t w = spec.width, h = spec.height, n = w * h;
  const double total = static_cast<double>(n);

  SyntheticScene scene;
  scene.pre_labels.assign(n, 0);
  Rng label_rng(spec.seed, kLabels);
  for (std::size_t k = 0; k < spec.n_classes; ++k) {
    const double area = label_rng.uniform(0.08, 0.18) * total;
    paint(scene.pre_labels, w, h, random_shape(label_rng, w, h, area), static_cast<int>(k + 1));
  }

  // Changed regions take over an existing class other than the one they
  // mostly cover, so the label set (and its radiometric separation) is shared
  // by both epochs.
  const double target = spec.change_fraction * total;
  const double lower = 0.8 * target, upper = 1.2 * target;
  const std::size_t label_count = spec.n_classes + 1;
  scene.post_labels = scene.pre_labels;
  Rng change_rng(spec.seed, kChange);
  std::size_t changed = 0;
  bool reached = false;
  for (std::size_t attempt = 0; attempt < kMaxRelabelAttempts && !reached; ++attempt) {
    const double needed = target - static_cast<double>(changed);
    const double area = std::max(
        16.0, std::min(change_rng.uniform(0.15, 0.3) * target, change_rng.uniform(0.9, 1.2) * needed));
    const Shape shape = random_shape(change_rng, w, h, area);
    std::vector<int> footprint(n, -1);
    paint(footprint, w, h, shape, 0);
    std::vector<std::size_t> covered(label_count, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (footprint[i] == 0) ++covered[static_cast<std::size_t>(scene.post_labels[i])];
    }
    const auto majority = static_cast<std::size_t>(
        std::max_element(covered.begin(), covered.end()) - covered.begin());
    std::size_t label = change_rng.below(label_count - 1);
    if (label >= majority) ++label;

    std::vector<int> trial = scene.post_labels;
    for (std::size_t i = 0; i < n; ++i) {
      if (footprint[i] == 0) trial[i] = static_cast<int>(label);
    }
    std::size_t trial_changed = 0;
    for (std::size_t i = 0; i < n; ++i) trial_changed += trial[i] != scene.pre_labels[i] ? 1 : 0;
    if (static_cast<double>(trial_changed) > upper || trial_changed <= changed) continue;
    scene.post_labels = std::move(trial);
    changed = trial_changed;
    reached = static_cast<double>(changed) >= lower;
  }
  if (!reached) {
    throw Error(ErrorKind::generation, "could not reach the requested change fraction within " +
                                           std::to_string(kMaxRelabelAttempts) + " attempts");
  }

  Rng radiometry(spec.seed, kRadiometry);
  scene.optical_means.resize(label_count);
  scene.reflectivity.resize(label_count);
  for (std::size_t b = 0; b < 3; ++b) {
    const auto levels = stratified_levels(radiometry, label_count, 0.2, 0.9, false);
    for (std::size_t l = 0; l < label_count; ++l) scene.optical_means[l][b] = levels[l];
  }
  scene.reflectivity = stratified_levels(radiometry, label_count, 0.1, 0.9, true);

  scene.optical = Raster(w, h, 3, Modality::optical);
  Rng optical_rng(spec.seed, kOpticalNoise);
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const double mean = scene.optical_means[static_cast<std::size_t>(scene.pre_labels[i])][b];
      scene.optical.data[b * n + i] =
          std::clamp(mean + kOpticalNoiseSigma * optical_rng.normal(), 0.0, 1.0);
    }
  }

  scene.sar = Raster(w, h, 1, Modality::sar);
  Rng speckle_rng(spec.seed, kSpeckle);
  const auto looks = static_cast<double>(spec.speckle_looks);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = scene.reflectivity[static_cast<std::size_t>(scene.post_labels[i])];
    scene.sar.data[i] = std::max(kSarFloor, r * speckle_rng.gamma(looks, 1.0 / looks));
  }

  scene.truth = Mask(w, h);
  for (std::size_t i = 0; i < n; ++i) {
    scene.truth.data[i] = scene.pre_labels[i] != scene.post_labels[i] ? 1 : 0;
  }
  return scene;
}

}  // namespace alsc
