#pragma once

#include "alsc/raster.hpp"

#include <cstddef>
#include <vector>

namespace alsc {

/// Geometry of the patch search.
///   half_width  p: patches are (2p+1) x (2p+1)
///   window      omega: side of the search window, in pixels
///   target_step delta_p: spacing of target patch centers
///   search_step delta_s: spacing of candidate centers inside the window
///   neighbors   K: number of neighbors kept in each graph
struct PatchParams {
  std::size_t half_width = 1;
  std::size_t window = 75;
  std::size_t target_step = 1;
  std::size_t search_step = 3;
  std::size_t neighbors = 35;

  /// omega = 75p, delta_p = p, delta_s = 2p+1, K = 35.
  static PatchParams defaults(std::size_t half_width);

  std::size_t side() const noexcept { return 2 * half_width + 1; }
  std::size_t patch_pixels() const noexcept { return side() * side(); }

  /// Throws invalid_argument when any parameter constraint is violated.
  void validate() const;
};

struct PatchRef {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const PatchRef&, const PatchRef&) = default;
};

/// Candidate neighbors of one target, in row-major lattice order.
struct NeighborSet {
  PatchRef target;
  std::vector<PatchRef> candidates;

  std::size_t size() const noexcept { return candidates.size(); }
};

/// Centers of all target patches. Per axis the centers are p, p+dp, p+2dp, ...
/// with the last one forced to (extent-1-p) so every pixel is covered.
std::vector<PatchRef> target_grid(std::size_t width, std::size_t height, const PatchParams& params);

/// Every in-image lattice point (row + a*ds, col + b*ds), 2|a|ds <= omega-1,
/// excluding the target itself. No count requirement.
NeighborSet candidate_lattice(const PatchRef& target, std::size_t width, std::size_t height,
                              const PatchParams& params);

/// candidate_lattice, additionally requiring at least K+1 candidates.
NeighborSet neighbor_candidates(const PatchRef& target, std::size_t width, std::size_t height,
                                const PatchParams& params);

/// Patch vector of length (2p+1)^2 * bands; band-major, row-major inside a band.
std::vector<double> extract(const Raster& raster, const PatchRef& ref, std::size_t half_width);

bool patch_fits(const PatchRef& ref, std::size_t width, std::size_t height,
                std::size_t half_width) noexcept;

}  // namespace alsc
