#pragma once

#include "alsc/patch.hpp"
#include "alsc/raster.hpp"

#include <span>
#include <vector>

namespace alsc {

/// Squared Euclidean (Frobenius) distance between two patch vectors.
double dist_euclidean(std::span<const double> a, std::span<const double> b);

/// Gamma-likelihood distance for speckled data:
///   sum_q log((a_q + b_q) / (2 sqrt(a_q b_q))).
/// Nonnegative by AM-GM. Every element must be strictly positive.
double dist_gamma(std::span<const double> a, std::span<const double> b);

using PatchKernel = double (*)(std::span<const double>, std::span<const double>);

/// Kernel used for a modality.
PatchKernel kernel_for(Modality modality);

/// Distance between two patches of the same raster, evaluated in place without
/// materializing patch vectors. Uses the raster's modality kernel.
class PatchDistance {
 public:
  PatchDistance(const Raster& raster, std::size_t half_width);

  double operator()(const PatchRef& a, const PatchRef& b) const;

  const Raster& raster() const noexcept { return *raster_; }
  std::size_t half_width() const noexcept { return half_width_; }

 private:
  const Raster* raster_;
  std::size_t half_width_;
};

/// dist_i: distance from the target to each candidate, in candidate order.
std::vector<double> distance_vector(const Raster& raster, const NeighborSet& neighbors,
                                    std::size_t half_width);

/// Same as distance_vector but through a prepared evaluator.
std::vector<double> distance_vector(const PatchDistance& distance, const NeighborSet& neighbors);

}  // namespace alsc
