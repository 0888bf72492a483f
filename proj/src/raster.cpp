#include "alsc/raster.hpp"

#include "alsc/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace alsc {

namespace fs = std::filesystem;

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::domain: return "domain";
    case ErrorKind::generation: return "generation";
  }
  return "unknown";
}

Modality parse_modality(std::string_view name) {
  if (name == "optical") return Modality::optical;
  if (name == "sar") return Modality::sar;
  throw Error(ErrorKind::invalid_argument, "unknown modality '" + std::string(name) + "'");
}

std::string_view to_string(Modality modality) {
  return modality == Modality::sar ? "sar" : "optical";
}

Raster::Raster(std::size_t width, std::size_t height, std::size_t bands, Modality modality,
               double fill)
    : width(width), height(height), bands(bands), modality(modality),
      data(width * height * bands, fill) {}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count_if(data.begin(), data.end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

fs::path sidecar_path(const fs::path& path) {
  fs::path sidecar = path;
  sidecar.replace_extension(".json");
  return sidecar;
}

namespace {

struct Pnm {
  char kind = 0;  // '5' or '6'
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> samples;
};

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Header tokens may be separated by arbitrary whitespace and '#' comments.
std::size_t read_header_int(std::istream& in, const fs::path& path) {
  for (;;) {
    int c = in.peek();
    if (c == EOF) break;
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string discard;
      std::getline(in, discard);
    } else {
      break;
    }
  }
  long long value = -1;
  if (!(in >> value) || value <= 0) {
    throw Error(ErrorKind::format, "malformed PNM header in " + path.string());
  }
  return static_cast<std::size_t>(value);
}

Pnm read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    throw Error(ErrorKind::format, "not a binary PGM/PPM file: " + path.string());
  }
  Pnm pnm;
  pnm.kind = magic[1];
  pnm.width = read_header_int(in, path);
  pnm.height = read_header_int(in, path);
  const std::size_t maxval = read_header_int(in, path);
  if (maxval > 255) {
    throw Error(ErrorKind::format,
                "unsupported bit depth (maxval " + std::to_string(maxval) + ") in " + path.string());
  }
  if (!std::isspace(in.get())) {
    throw Error(ErrorKind::format, "malformed PNM header in " + path.string());
  }
  const std::size_t channels = pnm.kind == '6' ? 3 : 1;
  pnm.samples.resize(pnm.width * pnm.height * channels);
  in.read(reinterpret_cast<char*>(pnm.samples.data()),
          static_cast<std::streamsize>(pnm.samples.size()));
  if (static_cast<std::size_t>(in.gcount()) != pnm.samples.size()) {
    throw Error(ErrorKind::format, "PNM payload shorter than header declares: " + path.string());
  }
  return pnm;
}

Raster load_pnm_raster(const fs::path& path, Modality modality) {
  const Pnm pnm = read_pnm(path);
  const std::size_t channels = pnm.kind == '6' ? 3 : 1;
  Raster raster(pnm.width, pnm.height, channels, modality);
  const std::size_t n = pnm.width * pnm.height;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      raster.data[c * n + i] = pnm.samples[i * channels + c];
    }
  }
  return raster;
}

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

Raster load_flat_raster(const fs::path& path, Modality modality) {
  const fs::path header_path = sidecar_path(path);
  std::ifstream header_in(header_path);
  if (!header_in) throw Error(ErrorKind::io, "missing sidecar header " + header_path.string());

  nlohmann::json header;
  try {
    header_in >> header;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, "malformed sidecar " + header_path.string() + ": " + e.what());
  }
  std::size_t width = 0, height = 0, bands = 0;
  std::string dtype;
  try {
    width = header.at("width").get<std::size_t>();
    height = header.at("height").get<std::size_t>();
    bands = header.at("bands").get<std::size_t>();
    dtype = header.value("dtype", std::string("f32"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, "malformed sidecar " + header_path.string() + ": " + e.what());
  }
  if (width == 0 || height == 0 || bands == 0) {
    throw Error(ErrorKind::format, "sidecar declares an empty raster: " + header_path.string());
  }
  if (dtype != "f32") {
    throw Error(ErrorKind::format, "unsupported dtype '" + dtype + "' in " + header_path.string());
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  const std::size_t expected = width * height * bands;
  if (bytes != expected * sizeof(float)) {
    throw Error(ErrorKind::dimension_mismatch,
                "payload of " + path.string() + " holds " + std::to_string(bytes / sizeof(float)) +
                    " values, header declares " + std::to_string(expected));
  }
  std::vector<std::uint32_t> raw(expected);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw Error(ErrorKind::io, "short read on " + path.string());

  Raster raster(width, height, bands, modality);
  for (std::size_t i = 0; i < expected; ++i) {
    raster.data[i] = std::bit_cast<float>(to_little_endian(raw[i]));
  }
  return raster;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void write_pnm(const fs::path& path, char kind, std::size_t width, std::size_t height,
               unsigned maxval, const std::vector<std::uint8_t>& payload) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << 'P' << kind << '\n' << width << ' ' << height << '\n' << maxval << '\n';
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error(ErrorKind::io, "write failed on " + path.string());
}

}  // namespace

Raster load_raster(const fs::path& path, Modality modality) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return load_pnm_raster(path, modality);
  return load_flat_raster(path, modality);
}

void write_raster(const fs::path& path, const Raster& raster) {
  if (raster.data.size() != raster.width * raster.height * raster.bands) {
    throw Error(ErrorKind::dimension_mismatch, "raster data length does not match dimensions");
  }
  ensure_parent(path);
  std::vector<std::uint32_t> raw(raster.data.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(raster.data[i])));
  }
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t)));
    if (!out) throw Error(ErrorKind::io, "write failed on " + path.string());
  }
  const nlohmann::json header = {
      {"width", raster.width}, {"height", raster.height}, {"bands", raster.bands}, {"dtype", "f32"}};
  std::ofstream header_out(sidecar_path(path));
  if (!header_out) throw Error(ErrorKind::io, "cannot write " + sidecar_path(path).string());
  header_out << header.dump(2) << '\n';
}

void write_pgm16(const fs::path& path, std::size_t width, std::size_t height,
                 std::span<const double> values) {
  if (values.size() != width * height) {
    throw Error(ErrorKind::dimension_mismatch, "plane length does not match dimensions");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = values.empty() ? 0.0 : *hi - *lo;
  std::vector<std::uint8_t> payload(values.size() * 2);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double scaled = range > 0.0 ? (values[i] - *lo) / range * 65535.0 : 0.0;
    const auto v = static_cast<std::uint16_t>(std::lround(std::clamp(scaled, 0.0, 65535.0)));
    payload[2 * i] = static_cast<std::uint8_t>(v >> 8);  // PGM is big-endian
    payload[2 * i + 1] = static_cast<std::uint8_t>(v & 0xFF);
  }
  write_pnm(path, '5', width, height, 65535, payload);
}

Mask load_mask(const fs::path& path) {
  const Pnm pnm = read_pnm(path);
  if (pnm.kind != '5') throw Error(ErrorKind::format, "mask must be a P5 PGM: " + path.string());
  Mask mask(pnm.width, pnm.height);
  for (std::size_t i = 0; i < pnm.samples.size(); ++i) mask.data[i] = pnm.samples[i] >= 128 ? 1 : 0;
  return mask;
}

void write_mask(const fs::path& path, const Mask& mask) {
  std::vector<std::uint8_t> payload(mask.data.size());
  std::transform(mask.data.begin(), mask.data.end(), payload.begin(),
                 [](std::uint8_t v) -> std::uint8_t { return v ? 255 : 0; });
  write_pnm(path, '5', mask.width, mask.height, 255, payload);
}

Raster normalize(const Raster& raster) {
  Raster out = raster;
  const bool sar = raster.modality == Modality::sar;
  const double lo_target = sar ? kSarFloor : 0.0;
  const double span_target = 1.0 - lo_target;
  for (std::size_t b = 0; b < raster.bands; ++b) {
    auto src = raster.plane(b);
    auto dst = out.plane(b);
    if (src.empty()) continue;
    const auto [lo, hi] = std::minmax_element(src.begin(), src.end());
    const double range = *hi - *lo;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double unit = range > 0.0 ? (src[i] - *lo) / range : 0.0;
      dst[i] = sar ? std::max(kSarFloor, lo_target + span_target * unit) : unit;
    }
  }
  return out;
}

}  // namespace alsc
