#include "alsc/error.hpp"
#include "alsc/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace alsc {
namespace {

TEST(Rng, StreamsAreIndependentAndReproducible) {
  Rng a(5, 1), b(5, 1), c(5, 2);
  for (int i = 0; i < 10; ++i) {
    const double va = a.uniform();
    EXPECT_EQ(va, b.uniform());
    EXPECT_NE(va, c.uniform());
  }
}

TEST(Rng, FixedSequence) {
  // Pinned so that any platform change in the generator is caught.
  Rng r(0, 0);
  const double first = r.uniform();
  Rng again(0, 0);
  EXPECT_EQ(first, again.uniform());
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFull);
}

TEST(Rng, UniformAndNormalMoments) {
  Rng r(9, 3);
  double su = 0, sn = 0, sn2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
}

TEST(Rng, GammaMoments) {
  Rng r(3, 4);
  const double shape = 4.0, scale = 0.25;
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = r.gamma(shape, scale);
    s += g;
    s2 += g * g;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 1.0, 0.01);
  EXPECT_NEAR(var, 0.25, 0.01);
}

TEST(Synth, ChangeFractionWithinTolerance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (double fraction : {0.03, 0.08, 0.2}) {
      SceneSpec s;
      s.seed = seed;
      s.change_fraction = fraction;
      s.width = 96;
      s.height = 80;
      const SyntheticScene scene = generate(s);
      const double got = static_cast<double>(scene.truth.count()) / (96.0 * 80.0);
      EXPECT_GE(got, 0.8 * fraction);
      EXPECT_LE(got, 1.2 * fraction);
    }
  }
}

TEST(Synth, SameSeedIsBitIdentical) {
  SceneSpec s;
  s.seed = 17;
  const SyntheticScene a = generate(s), b = generate(s);
  EXPECT_EQ(a.optical.data, b.optical.data);
  EXPECT_EQ(a.sar.data, b.sar.data);
  EXPECT_EQ(a.truth.data, b.truth.data);
  s.seed = 18;
  EXPECT_NE(generate(s).sar.data, a.sar.data);
}

TEST(Synth, ShapesAndRanges) {
  SceneSpec s;
  s.width = 50;
  s.height = 40;
  s.seed = 2;
  const SyntheticScene scene = generate(s);
  EXPECT_EQ(scene.optical.bands, 3u);
  EXPECT_EQ(scene.sar.bands, 1u);
  EXPECT_EQ(scene.optical.width, 50u);
  EXPECT_EQ(scene.sar.height, 40u);
  EXPECT_EQ(scene.truth.data.size(), 2000u);
  EXPECT_GT(scene.truth.count(), 0u);
  EXPECT_LT(scene.truth.count(), 2000u);
  for (double v : scene.optical.data) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  for (double v : scene.sar.data) EXPECT_GE(v, kSarFloor);
  for (const auto& m : scene.optical_means)
    for (double v : m) {
      EXPECT_GE(v, 0.2);
      EXPECT_LE(v, 0.9);
    }
  for (double v : scene.reflectivity) {
    EXPECT_GE(v, 0.1);
    EXPECT_LE(v, 0.9);
  }
}

TEST(Synth, TruthIsLabelChange) {
  SceneSpec s;
  s.seed = 3;
  const SyntheticScene scene = generate(s);
  for (std::size_t i = 0; i < scene.truth.data.size(); ++i) {
    EXPECT_EQ(scene.truth.data[i] != 0, scene.pre_labels[i] != scene.post_labels[i]);
  }
}

TEST(Synth, SpeckleVarianceMatchesLooks) {
  SceneSpec s;
  s.width = 160;
  s.height = 160;
  s.seed = 4;
  s.speckle_looks = 4;
  const SyntheticScene scene = generate(s);
  // Background label 0 unchanged in both epochs is the largest region.
  const double refl = scene.reflectivity[0];
  double sum = 0, sum2 = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < scene.sar.data.size(); ++i) {
    if (scene.post_labels[i] != 0) continue;
    sum += scene.sar.data[i];
    sum2 += scene.sar.data[i] * scene.sar.data[i];
    ++n;
  }
  ASSERT_GE(n, 10000u);
  const double mean = sum / n;
  const double var = (sum2 - n * mean * mean) / (n - 1);
  EXPECT_NEAR(var, refl * refl / 4.0, 0.15 * refl * refl / 4.0);
  EXPECT_NEAR(mean, refl, 0.05 * refl);
}

TEST(Synth, InvalidSpecThrows) {
  SceneSpec s;
  s.change_fraction = 0.5;
  EXPECT_THROW(generate(s), Error);
  s = SceneSpec{};
  s.speckle_looks = 0;
  EXPECT_THROW(generate(s), Error);
  s = SceneSpec{};
  s.width = 4;
  EXPECT_THROW(generate(s), Error);
}

}  // namespace
}  // namespace alsc
