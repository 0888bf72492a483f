#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace alsc {

enum class Modality { optical, sar };

Modality parse_modality(std::string_view name);
std::string_view to_string(Modality modality);

/// Lower bound applied to normalized SAR values so the Gamma-likelihood
/// distance (log and square root of pixel values) stays finite.
inline constexpr double kSarFloor = 1e-6;

/// Multi-band image. Storage is band-sequential: band 0 as a full row-major
/// plane, then band 1, and so on. This is also the on-disk order of the
/// flat-binary format and the element order of extracted patch vectors.
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t bands = 0;
  Modality modality = Modality::optical;
  std::vector<double> data;

  Raster() = default;
  Raster(std::size_t width, std::size_t height, std::size_t bands, Modality modality,
         double fill = 0.0);

  std::size_t plane_size() const noexcept { return width * height; }

  double& at(std::size_t band, std::size_t row, std::size_t col) {
    return data[band * plane_size() + row * width + col];
  }
  double at(std::size_t band, std::size_t row, std::size_t col) const {
    return data[band * plane_size() + row * width + col];
  }

  std::span<const double> plane(std::size_t band) const {
    return std::span<const double>(data).subspan(band * plane_size(), plane_size());
  }
  std::span<double> plane(std::size_t band) {
    return std::span<double>(data).subspan(band * plane_size(), plane_size());
  }
};

/// Per-pixel binary annotation, true (1) meaning changed.
struct Mask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> data;

  Mask() = default;
  Mask(std::size_t width, std::size_t height, bool fill = false)
      : width(width), height(height), data(width * height, fill ? 1 : 0) {}

  bool operator()(std::size_t row, std::size_t col) const { return data[row * width + col] != 0; }
  std::size_t count() const;
};

/// `foo/bar.f32` -> `foo/bar.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// Reads 8-bit binary PGM (P5) / PPM (P6), or flat little-endian float32
/// band-sequential data described by a JSON sidecar. Values are returned as
/// stored (8-bit samples keep their 0..255 range).
Raster load_raster(const std::filesystem::path& path, Modality modality);

/// Writes the flat-binary float32 format plus its sidecar.
void write_raster(const std::filesystem::path& path, const Raster& raster);

/// Writes a single plane as a 16-bit P5 PGM after min-max scaling to 0..65535.
void write_pgm16(const std::filesystem::path& path, std::size_t width, std::size_t height,
                 std::span<const double> values);

/// P5 PGM; samples >= 128 are changed.
Mask load_mask(const std::filesystem::path& path);
/// P5 PGM with 0 = unchanged and 255 = changed.
void write_mask(const std::filesystem::path& path, const Mask& mask);

/// Per-band min-max map to [0, 1]. Constant bands map to zero. SAR rasters are
/// mapped onto [kSarFloor, 1] instead, so the result is strictly positive and
/// the operation stays idempotent.
Raster normalize(const Raster& raster);

}  // namespace alsc
