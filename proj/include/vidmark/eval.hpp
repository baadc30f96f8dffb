#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vidmark/clip.hpp"
#include "vidmark/distortion.hpp"
#include "vidmark/report.hpp"
#include "vidmark/spread_spectrum.hpp"
#include "vidmark/synth.hpp"

namespace vidmark {

struct SyntheticCorpus {
  int count = 20;
  ClipShape shape{8, 128, 128};
  std::uint64_t seed = 1;
};

struct EvalConfig {
  // Clip files (a '*' in the file name is expanded) or a synthetic corpus.
  std::vector<std::string> corpus;
  std::optional<SyntheticCorpus> synthetic = SyntheticCorpus{};

  std::uint64_t key_seed = 7;
  std::string key_path;  // overrides key_seed when set

  // Either fixed strengths or PSNR targets reached by per-clip bisection.
  std::vector<double> alpha;
  std::vector<double> psnr_targets = {37.0};
  double psnr_tolerance = 0.25;
  int bisection_iterations = 20;

  std::vector<int> payload = {96};
  int chip_len = 0;  // 0: floor(slots / m)

  std::vector<DistortionSpec> distortions;
  int repeats = 1;
  std::uint64_t seed = 0;
  TileLayout tile;

  // dims
  std::vector<int> lengths = {8, 16, 32, 64};
  std::vector<std::pair<int, int>> resolutions = {{128, 128}, {240, 462}, {480, 864}};  // (height, width)

  // editing
  std::vector<int> backgrounds = {60, 120, 240, 360, 720};
  std::pair<int, int> background_size = {240, 462};
  int editing_repeats = 5;
  int null_windows = 40;
  int window_len = 8;
  int stride = 1;
  double threshold = 0.3;

  std::string csv_path;
  std::string json_path;

  bool timing = false;
  int threads = 0;  // 0: OpenMP default
  CodecConfig codec;
  bool codec_strict = false;

  nlohmann::json to_json() const;
  // Throws ConfigInvalid on unknown keys or bad values.
  static EvalConfig from_json(const nlohmann::json& j);
  void validate() const;
};

EvalConfig load_config(const std::filesystem::path& path);

// Identity plus h264 CRF 22, frame average N=3, drop 0.5, swap 0.5, blur sigma
// 2.0, noise 0.04, crop 0.4 and hue 1.0.
std::vector<DistortionSpec> matrix_distortions();
// H.264 CRF 22, crop 0.5, frame drop 0.5, noise 0.04.
std::vector<DistortionSpec> panel_distortions();

struct CorpusClip {
  std::string id;
  VideoClip clip;
};
// Throws CorpusEmpty.
std::vector<CorpusClip> load_corpus(const EvalConfig& cfg);

// Bilinear spatial resampling; frames are looped or truncated to `frames`.
VideoClip resample_clip(const VideoClip& clip, int frames, int height, int width);

struct AlphaFit {
  double alpha = 0.0;
  double psnr = 0.0;
  int iterations = 0;
};
// Bisection on log alpha until |PSNR - target| <= tolerance.
AlphaFit tune_alpha(const VideoClip& cover, const Message& msg, const KeySpec& spec, const TileLayout& layout,
                    double target_db, double tolerance = 0.25, int max_iterations = 20);

KeySpec key_for(const EvalConfig& cfg, int payload, int height, int width);

using Progress = std::function<void(const ReportRow&)>;

// Each run resumes from "<csv>.partial" when cfg.csv is set and the file
// exists, and writes the final reports when csv/json paths are set.
EvalReport run_matrix(const EvalConfig& cfg, const Progress& progress = {});
EvalReport sweep_alpha(const EvalConfig& cfg, const Progress& progress = {});
EvalReport sweep_payload(const EvalConfig& cfg, const Progress& progress = {});
EvalReport sweep_dimensions(const EvalConfig& cfg, const Progress& progress = {});
EvalReport run_editing_app(const EvalConfig& cfg, const Progress& progress = {});

}  // namespace vidmark
