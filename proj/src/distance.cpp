#include "alsc/distance.hpp"

#include "alsc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace alsc {

namespace {

inline double euclidean_term(double a, double b) {
  const double d = a - b;
  return d * d;
}

// Rounding can push the ratio a hair below 1 when a ~ b; the exact value is >= 0.
inline double gamma_term(double a, double b) {
  return std::max(0.0, std::log((a + b) / (2.0 * std::sqrt(a * b))));
}

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::dimension_mismatch, "patch vectors differ in length (" +
                                                   std::to_string(a.size()) + " vs " +
                                                   std::to_string(b.size()) + ")");
  }
}

template <double (*Term)(double, double)>
double patch_sum(const Raster& raster, std::size_t p, const PatchRef& a, const PatchRef& b) {
  const std::size_t side = 2 * p + 1;
  const std::size_t width = raster.width;
  const std::size_t plane = raster.plane_size();
  const std::size_t a0 = (a.row - p) * width + (a.col - p);
  const std::size_t b0 = (b.row - p) * width + (b.col - p);
  double sum = 0.0;
  for (std::size_t band = 0; band < raster.bands; ++band) {
    const double* pa = raster.data.data() + band * plane + a0;
    const double* pb = raster.data.data() + band * plane + b0;
    for (std::size_t r = 0; r < side; ++r, pa += width, pb += width) {
      for (std::size_t c = 0; c < side; ++c) sum += Term(pa[c], pb[c]);
    }
  }
  return sum;
}

}  // namespace

double dist_euclidean(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  double sum = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) sum += euclidean_term(a[q], b[q]);
  return sum;
}

double dist_gamma(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  double sum = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (!(a[q] > 0.0) || !(b[q] > 0.0)) {
      throw Error(ErrorKind::domain, "Gamma distance requires strictly positive values");
    }
    sum += gamma_term(a[q], b[q]);
  }
  return sum;
}

PatchKernel kernel_for(Modality modality) {
  switch (modality) {
    case Modality::optical: return &dist_euclidean;
    case Modality::sar: return &dist_gamma;
  }
  throw Error(ErrorKind::invalid_argument, "no distance kernel for modality");
}

PatchDistance::PatchDistance(const Raster& raster, std::size_t half_width)
    : raster_(&raster), half_width_(half_width) {
  if (raster.modality == Modality::sar) {
    const bool positive =
        std::all_of(raster.data.begin(), raster.data.end(), [](double v) { return v > 0.0; });
    if (!positive) {
      throw Error(ErrorKind::domain,
                  "SAR raster contains non-positive values; normalize it before use");
    }
  }
}

double PatchDistance::operator()(const PatchRef& a, const PatchRef& b) const {
  if (raster_->modality == Modality::sar) {
    return patch_sum<gamma_term>(*raster_, half_width_, a, b);
  }
  return patch_sum<euclidean_term>(*raster_, half_width_, a, b);
}

std::vector<double> distance_vector(const PatchDistance& distance, const NeighborSet& neighbors) {
  std::vector<double> out;
  out.reserve(neighbors.size());
  for (const PatchRef& candidate : neighbors.candidates) {
    out.push_back(distance(neighbors.target, candidate));
  }
  return out;
}

std::vector<double> distance_vector(const Raster& raster, const NeighborSet& neighbors,
                                    std::size_t half_width) {
  return distance_vector(PatchDistance(raster, half_width), neighbors);
}

}  // namespace alsc
