#include "alsc/cli.hpp"
#include "alsc/raster.hpp"
#include "support/temp_dir.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace alsc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::TempDir;

struct Outcome {
  int status;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "alsc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void make_scene(const TempDir& dir, const std::string& seed = "7", const std::string& size = "96") {
  const Outcome o = invoke({"synth", "--out", (dir / "scene").string(), "--seed", seed, "--width",
                            size, "--height", size});
  ASSERT_EQ(o.status, 0) << o.err;
}

std::vector<std::string> pair_args(const TempDir& dir) {
  return {"--x", (dir / "scene/optical.f32").string(), "--x-modality", "optical", "--y",
          (dir / "scene/sar.f32").string(), "--y-modality", "sar", "--p", "2"};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TEST(Cli, SmokeRun) {
  TempDir dir;
  make_scene(dir);
  const fs::path out = dir / "run";
  const Outcome o = invoke(concat(concat({"run"}, pair_args(dir)),
                                  {"--truth", (dir / "scene/truth.pgm").string(), "--out",
                                   out.string(), "--workers", "1"}));
  ASSERT_EQ(o.status, 0) << o.err;

  const json manifest = read_json(out / cli::kManifest);
  for (const auto& name : manifest["artifacts"]) EXPECT_TRUE(fs::exists(out / name.get<std::string>())) << name;
  for (const char* name : {"di_fused.f32", "di_forward.f32", "di_backward.f32", "di_fused.pgm",
                           "cm_otsu.pgm", "cm_pcakm.pgm", "metrics.json", "roc.csv"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  const json metrics = read_json(out / cli::kMetrics);
  const double auc = metrics["auc"].get<double>();
  EXPECT_GT(auc, 0.0);
  EXPECT_LE(auc, 1.0);
  for (const char* key : {"fp_rate", "fn_rate", "oa", "kappa"}) EXPECT_TRUE(metrics.contains(key));
  EXPECT_TRUE(metrics["maps"].contains("otsu"));
  EXPECT_TRUE(metrics["maps"].contains("pcakm"));

  const Raster di = load_raster(out / cli::kFusedDi, Modality::optical);
  EXPECT_EQ(di.width, 96u);
  EXPECT_EQ(di.bands, 1u);
  const Mask cm = load_mask(out / "cm_otsu.pgm");
  EXPECT_EQ(cm.width, 96u);
}

TEST(Cli, IdenticalInputsAreDegenerate) {
  TempDir dir;
  make_scene(dir, "3", "48");
  const std::string x = (dir / "scene/optical.f32").string();
  const fs::path out = dir / "same";
  const Outcome o = invoke({"run", "--x", x, "--x-modality", "optical", "--y", x, "--y-modality",
                            "optical", "--p", "2", "--truth", (dir / "scene/truth.pgm").string(),
                            "--out", out.string()});
  ASSERT_EQ(o.status, 0) << o.err;
  const json manifest = read_json(out / cli::kManifest);
  EXPECT_TRUE(manifest["stages"]["di"]["degenerate"].get<bool>());
  EXPECT_EQ(load_mask(out / "cm_otsu.pgm").count(), 0u);
  EXPECT_EQ(load_mask(out / "cm_pcakm.pgm").count(), 0u);
  const json metrics = read_json(out / cli::kMetrics);
  EXPECT_TRUE(metrics["auc"].is_null());
  EXPECT_TRUE(metrics.contains("auc_skipped"));
}

TEST(Cli, RerunIsBitIdentical) {
  TempDir dir;
  make_scene(dir, "5", "48");
  for (const char* workers : {"1", "3"}) {
    const Outcome a = invoke(concat(concat({"di"}, pair_args(dir)),
                                    {"--out", (dir / "a").string(), "--workers", workers}));
    const Outcome b = invoke(concat(concat({"di"}, pair_args(dir)),
                                    {"--out", (dir / "b").string(), "--workers", "1"}));
    ASSERT_EQ(a.status, 0) << a.err;
    ASSERT_EQ(b.status, 0) << b.err;
    for (const char* f : {"di_fused.f32", "di_forward.f32", "di_backward.f32"}) {
      EXPECT_EQ(read_bytes(dir / "a" / f), read_bytes(dir / "b" / f)) << f << " workers=" << workers;
    }
  }
}

TEST(Cli, StagesComposeToRun) {
  TempDir dir;
  make_scene(dir, "9", "48");
  const std::string truth = (dir / "scene/truth.pgm").string();
  const fs::path whole = dir / "whole", staged = dir / "staged";
  ASSERT_EQ(invoke(concat(concat({"run"}, pair_args(dir)), {"--truth", truth, "--out", whole.string()})).status, 0);
  ASSERT_EQ(invoke(concat(concat({"di"}, pair_args(dir)), {"--out", staged.string()})).status, 0);
  ASSERT_EQ(invoke({"segment", "--out", staged.string(), "--method", "both"}).status, 0);
  ASSERT_EQ(invoke({"evaluate", "--out", staged.string(), "--truth", truth}).status, 0);
  for (const char* f : {"di_fused.f32", "cm_otsu.pgm", "cm_pcakm.pgm", "roc.csv"}) {
    EXPECT_EQ(read_bytes(whole / f), read_bytes(staged / f)) << f;
  }
  const json a = read_json(whole / cli::kMetrics), b = read_json(staged / cli::kMetrics);
  EXPECT_EQ(a["auc"], b["auc"]);
  EXPECT_EQ(a["maps"], b["maps"]);
}

TEST(Cli, EvaluateDimensionMismatch) {
  TempDir dir;
  make_scene(dir, "2", "48");
  ASSERT_EQ(invoke(concat(concat({"di"}, pair_args(dir)), {"--out", (dir / "r").string()})).status, 0);
  Mask small(40, 40);
  small.data[0] = 1;
  write_mask(dir / "small.pgm", small);
  const Outcome o = invoke({"evaluate", "--out", (dir / "r").string(), "--truth",
                            (dir / "small.pgm").string()});
  EXPECT_EQ(o.status, 1);
  const json err = json::parse(o.err);
  EXPECT_EQ(err["error"]["kind"], "dimension_mismatch");
  EXPECT_EQ(err["error"]["command"], "evaluate");
  EXPECT_EQ(read_json(dir / "r" / cli::kErrorFile), err);
}

TEST(Cli, SegmentBothMethodsWriteDistinctMaps) {
  TempDir dir;
  make_scene(dir, "4", "48");
  const fs::path out = dir / "seg";
  ASSERT_EQ(invoke(concat(concat({"di"}, pair_args(dir)), {"--out", out.string()})).status, 0);
  ASSERT_EQ(invoke({"segment", "--out", out.string(), "--method", "otsu"}).status, 0);
  ASSERT_EQ(invoke({"segment", "--out", out.string(), "--method", "pcakm"}).status, 0);
  const Mask a = load_mask(out / "cm_otsu.pgm"), b = load_mask(out / "cm_pcakm.pgm");
  EXPECT_EQ(a.width, 48u);
  EXPECT_EQ(b.width, 48u);
  EXPECT_NE(read_bytes(out / "cm_otsu.pgm"), read_bytes(out / "cm_pcakm.pgm"));
  const json manifest = read_json(out / cli::kManifest);
  EXPECT_TRUE(manifest["stages"].contains("segment"));
}

TEST(Cli, ConfigFileAndFlagOverride) {
  TempDir dir;
  make_scene(dir, "6", "48");
  const json config = {
      {"x", {{"path", (dir / "scene/optical.f32").string()}, {"modality", "optical"}}},
      {"y", {{"path", (dir / "scene/sar.f32").string()}, {"modality", "sar"}}},
      {"params", {{"p", 1}, {"k", 10}}},
      {"out", (dir / "cfg").string()},
  };
  std::ofstream(dir / "config.json") << config.dump();
  const Outcome o = invoke({"di", "--config", (dir / "config.json").string(), "--k", "12"});
  ASSERT_EQ(o.status, 0) << o.err;
  const json record = json::parse(o.out);
  EXPECT_EQ(record["params"]["p"], 1);
  EXPECT_EQ(record["params"]["k"], 12);
  EXPECT_EQ(record["params"]["omega"], 75);
}

TEST(Cli, MissingInputsReportInvalidArgument) {
  TempDir dir;
  const Outcome o = invoke({"di", "--p", "2", "--out", (dir / "x").string()});
  EXPECT_EQ(o.status, 1);
  EXPECT_EQ(json::parse(o.err)["error"]["kind"], "invalid_argument");
}

TEST(Cli, UnknownFlagIsUsageError) {
  const Outcome o = invoke({"run", "--bogus"});
  EXPECT_EQ(o.status, 2);
}

TEST(Cli, HelpExitsCleanly) {
  const Outcome o = invoke({"--help"});
  EXPECT_EQ(o.status, 0);
  EXPECT_NE(o.out.find("synth"), std::string::npos);
}

}  // namespace
}  // namespace alsc
