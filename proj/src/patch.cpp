#include "alsc/patch.hpp"

#include "alsc/error.hpp"

#include <string>

namespace alsc {

PatchParams PatchParams::defaults(std::size_t half_width) {
  PatchParams params;
  params.half_width = half_width;
  params.window = 75 * half_width;
  params.target_step = half_width;
  params.search_step = 2 * half_width + 1;
  params.neighbors = 35;
  return params;
}

void PatchParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::invalid_argument, what); };
  if (half_width < 1) fail("patch half-width p must be >= 1");
  if (target_step < 1 || target_step > side()) fail("target step must lie in [1, 2p+1]");
  if (search_step < 1) fail("search step must be >= 1");
  if (window < 2 * search_step + 1) fail("search window must be >= 2*search_step + 1");
  if (neighbors < 1) fail("neighbor count K must be >= 1");
}

bool patch_fits(const PatchRef& ref, std::size_t width, std::size_t height,
                std::size_t half_width) noexcept {
  return ref.row >= half_width && ref.col >= half_width && ref.row + half_width < height &&
         ref.col + half_width < width;
}

namespace {

std::vector<std::size_t> axis_centers(std::size_t extent, std::size_t p, std::size_t step) {
  std::vector<std::size_t> centers;
  const std::size_t last = extent - 1 - p;
  for (std::size_t c = p; c < last; c += step) centers.push_back(c);
  centers.push_back(last);
  return centers;
}

}  // namespace

std::vector<PatchRef> target_grid(std::size_t width, std::size_t height, const PatchParams& params) {
  params.validate();
  const std::size_t p = params.half_width;
  if (width < params.side() || height < params.side()) {
    throw Error(ErrorKind::invalid_argument,
                "image " + std::to_string(width) + "x" + std::to_string(height) +
                    " is smaller than one patch of side " + std::to_string(params.side()));
  }
  const auto rows = axis_centers(height, p, params.target_step);
  const auto cols = axis_centers(width, p, params.target_step);
  std::vector<PatchRef> grid;
  grid.reserve(rows.size() * cols.size());
  for (std::size_t r : rows) {
    for (std::size_t c : cols) grid.push_back({r, c});
  }
  return grid;
}

NeighborSet candidate_lattice(const PatchRef& target, std::size_t width, std::size_t height,
                              const PatchParams& params) {
  const auto p = static_cast<long long>(params.half_width);
  const auto step = static_cast<long long>(params.search_step);
  const long long reach = static_cast<long long>(params.window - 1) / (2 * step);
  const auto w = static_cast<long long>(width);
  const auto h = static_cast<long long>(height);
  const auto r0 = static_cast<long long>(target.row);
  const auto c0 = static_cast<long long>(target.col);

  NeighborSet set;
  set.target = target;
  set.candidates.reserve(static_cast<std::size_t>((2 * reach + 1) * (2 * reach + 1)));
  for (long long a = -reach; a <= reach; ++a) {
    const long long r = r0 + a * step;
    if (r < p || r + p >= h) continue;
    for (long long b = -reach; b <= reach; ++b) {
      if (a == 0 && b == 0) continue;
      const long long c = c0 + b * step;
      if (c < p || c + p >= w) continue;
      set.candidates.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c)});
    }
  }
  return set;
}

NeighborSet neighbor_candidates(const PatchRef& target, std::size_t width, std::size_t height,
                                const PatchParams& params) {
  NeighborSet set = candidate_lattice(target, width, height, params);
  if (set.size() < params.neighbors + 1) {
    throw Error(ErrorKind::invalid_argument,
                "search window yields " + std::to_string(set.size()) +
                    " candidates, K+1 = " + std::to_string(params.neighbors + 1) + " required");
  }
  return set;
}

std::vector<double> extract(const Raster& raster, const PatchRef& ref, std::size_t half_width) {
  const std::size_t side = 2 * half_width + 1;
  std::vector<double> out;
  out.reserve(side * side * raster.bands);
  for (std::size_t b = 0; b < raster.bands; ++b) {
    for (std::size_t dr = 0; dr < side; ++dr) {
      const std::size_t row = ref.row - half_width + dr;
      for (std::size_t dc = 0; dc < side; ++dc) {
        out.push_back(raster.at(b, row, ref.col - half_width + dc));
      }
    }
  }
  return out;
}

}  // namespace alsc
