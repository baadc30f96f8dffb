#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vidmark/clip.hpp"
#include "vidmark/spread_spectrum.hpp"

namespace vidmark {

struct Region {
  int x0 = 0, y0 = 0;
  int width = 0, height = 0;
  bool operator==(const Region&) const = default;
};

// Fits mean and std of the raw detection statistic over unwatermarked
// clips. Clips longer than the key are split into key-length windows.
// Throws InsufficientSamples below 20 windows.
inline constexpr int kMinNullSamples = 20;
NullModel calibrate_null(const WatermarkKey& key, std::span<const VideoClip> clips);

struct DetectOptions {
  int window_len = 8;
  int stride = 1;
  // Spatial window examined in every frame; defaults to the whole frame.
  std::optional<Region> roi;
};

struct DetectionTrace {
  int window_len = 8;
  int stride = 1;
  std::vector<double> scores;  // per frame, max over covering windows
  std::vector<bool> labels;    // ground truth when known, else empty

  std::vector<int> window_starts;
  std::vector<double> window_scores;                           // logistic scores
  std::vector<double> window_stats;                            // raw statistics
  std::vector<std::vector<double>> window_soft;                // [window][bit]
  std::vector<std::vector<std::vector<double>>> window_bands;  // [window][bit][band]
};

// Throws ClipTooShort when T < window_len, KeyClipMismatch when the window
// (or ROI) does not have the key's dimensions.
DetectionTrace detect(const VideoClip& video, const WatermarkKey& key, const NullModel& null,
                      const DetectOptions& options = {});

struct FrameRun {
  int first = 0;
  int count = 0;
  int end() const { return first + count; }
  bool operator==(const FrameRun&) const = default;
};

struct FrameSelection {
  std::vector<int> frames;  // sorted
  std::vector<FrameRun> runs;
};

inline constexpr double kFilterThreshold = 0.3;
FrameSelection filter_frames(const DetectionTrace& trace, double threshold = kFilterThreshold);
// Run containing the highest-scoring kept frame; empty run if none kept.
FrameRun strongest_run(const DetectionTrace& trace, const FrameSelection& selection);

// Decodes from windows lying entirely inside kept frames. The strongest such
// window fixes the segment phase (start mod window_len); the band
// correlations of every kept window in that phase are pooled as in
// extract_segments. Windows off the segment grid are skipped because a Haar
// temporal band shifted by two frames correlates with the opposite sign.
// Falls back to the strongest window overall when none qualifies.
Message decode_filtered(const DetectionTrace& trace, const FrameSelection& selection);
// Same pooling with no frames removed: every window on the strongest
// window's segment grid contributes, watermarked or not.
Message decode_all(const DetectionTrace& trace);

double interval_iou(FrameRun a, FrameRun b);

struct EditingScenario {
  VideoClip composite;
  std::vector<bool> labels;
  Region patch;
  FrameRun watermarked;
};

inline constexpr int kPatchSide = 128;
inline constexpr int kPatchMargin = 4;
inline constexpr int kInsertFrames = 16;

// Lower-left patch position with the margin.
Region editing_patch_region(int height, int width);
// Centre crop of the source to 128x128 followed by one seeded saturation
// factor for the whole patch.
VideoClip prepare_patch(const VideoClip& wm_source, std::uint64_t seed);
void paste_frame(std::span<double> frame, int width, std::span<const double> patch_frame, const Region& where);

// Throws BadGeometry when the background is smaller than 462x240 or the
// patch does not fit in time.
inline constexpr int kMinBackgroundWidth = 462;
inline constexpr int kMinBackgroundHeight = 240;
EditingScenario make_editing_scenario(const VideoClip& background, const VideoClip& wm_source, int insert_at,
                                      std::uint64_t seed);

}  // namespace vidmark
