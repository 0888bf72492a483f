#pragma once

#include "alsc/patch.hpp"
#include "alsc/raster.hpp"
#include "alsc/segmentation.hpp"
#include "alsc/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace alsc::cli {

struct InputImage {
  std::filesystem::path path;
  Modality modality = Modality::optical;
};

/// Everything a subcommand may consume. Populated from an optional JSON config
/// file, then overridden by command-line flags.
struct RunConfig {
  std::optional<InputImage> x;
  std::optional<InputImage> y;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> di;
  std::vector<std::filesystem::path> maps;
  std::filesystem::path out = "alsc_out";

  std::optional<std::size_t> p;
  std::optional<std::size_t> omega;
  std::optional<std::size_t> delta_p;
  std::optional<std::size_t> delta_s;
  std::optional<std::size_t> k;

  /// "otsu", "pcakm" or "both".
  std::string method = "both";
  PcakmOptions pcakm;
  std::size_t workers = 0;
  SceneSpec synth;

  /// Defaults derived from p, with explicit values taking precedence.
  PatchParams patch_params() const;
};

/// Reads a JSON config (see README for the schema) into `config`.
void apply_json(const nlohmann::json& json, RunConfig& config);
nlohmann::json to_json(const RunConfig& config);

/// Artifact file names inside the output directory.
inline constexpr const char* kFusedDi = "di_fused.f32";
inline constexpr const char* kForwardDi = "di_forward.f32";
inline constexpr const char* kBackwardDi = "di_backward.f32";
inline constexpr const char* kFusedPreview = "di_fused.pgm";
inline constexpr const char* kMetrics = "metrics.json";
inline constexpr const char* kRocCsv = "roc.csv";
inline constexpr const char* kManifest = "run.json";
inline constexpr const char* kErrorFile = "error.json";
std::string map_file(SegmentMethod method);

/// Each command writes its artifacts into config.out, merges its section into
/// the run.json manifest there and returns that section.
nlohmann::json cmd_di(const RunConfig& config);
nlohmann::json cmd_segment(const RunConfig& config);
nlohmann::json cmd_evaluate(const RunConfig& config);
nlohmann::json cmd_synth(const RunConfig& config);
nlohmann::json cmd_run(const RunConfig& config);

/// Full command-line entry point. Returns the process exit status; failures
/// print an error JSON object on `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alsc::cli
