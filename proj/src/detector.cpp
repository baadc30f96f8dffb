#include "vidmark/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vidmark/distortion.hpp"
#include "vidmark/error.hpp"
#include "vidmark/rng.hpp"

namespace vidmark {

NullModel calibrate_null(const WatermarkKey& key, std::span<const VideoClip> clips) {
  std::vector<double> stats;
  for (const VideoClip& clip : clips) {
    if (clip.height() != key.height() || clip.width() != key.width()) {
      throw Error(Errc::KeyClipMismatch, "calibration clip is " + to_string(clip.shape()));
    }
    for (int t = 0; t + key.frames() <= clip.frames(); t += key.frames()) {
      const VideoClip window = clip.frames() == key.frames() ? clip : clip.slice_frames(t, key.frames());
      stats.push_back(extract(window, key).statistic);
    }
  }
  if (static_cast<int>(stats.size()) < kMinNullSamples) {
    throw Error(Errc::InsufficientSamples,
                "null calibration needs " + std::to_string(kMinNullSamples) + " windows, got " +
                    std::to_string(stats.size()));
  }
  const double n = static_cast<double>(stats.size());
  const double mean = std::accumulate(stats.begin(), stats.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : stats) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / (n - 1.0)), static_cast<int>(stats.size())};
}

DetectionTrace detect(const VideoClip& video, const WatermarkKey& key, const NullModel& null,
                      const DetectOptions& options) {
  if (options.window_len < 1 || options.stride < 1) throw Error(Errc::InvalidArgument, "window and stride must be >= 1");
  if (video.frames() < options.window_len) {
    throw Error(Errc::ClipTooShort, std::to_string(video.frames()) + " frames, window is " +
                                        std::to_string(options.window_len));
  }
  const VideoClip view =
      options.roi ? video.crop(options.roi->x0, options.roi->y0, options.roi->width, options.roi->height) : video;
  if (key.frames() != options.window_len || key.height() != view.height() || key.width() != view.width()) {
    throw Error(Errc::KeyClipMismatch, "key does not match the detection window");
  }

  DetectionTrace trace;
  trace.window_len = options.window_len;
  trace.stride = options.stride;
  for (int t = 0; t + options.window_len <= video.frames(); t += options.stride) trace.window_starts.push_back(t);
  if (trace.window_starts.back() + options.window_len < video.frames()) {
    trace.window_starts.push_back(video.frames() - options.window_len);
  }

  const auto windows = static_cast<int>(trace.window_starts.size());
  trace.window_scores.resize(windows);
  trace.window_stats.resize(windows);
  trace.window_soft.resize(windows);
  trace.window_bands.resize(windows);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < windows; ++i) {
    ExtractionResult r = extract(view.slice_frames(trace.window_starts[i], options.window_len), key, &null);
    trace.window_scores[i] = r.detection;
    trace.window_stats[i] = r.statistic;
    trace.window_soft[i] = std::move(r.soft);
    trace.window_bands[i] = std::move(r.per_band_scores);
  }

  trace.scores.assign(video.frames(), 0.0);
  for (int i = 0; i < windows; ++i) {
    for (int t = trace.window_starts[i]; t < trace.window_starts[i] + options.window_len; ++t) {
      trace.scores[t] = std::max(trace.scores[t], trace.window_scores[i]);
    }
  }
  return trace;
}

FrameSelection filter_frames(const DetectionTrace& trace, double threshold) {
  FrameSelection out;
  for (int t = 0; t < static_cast<int>(trace.scores.size()); ++t) {
    if (trace.scores[t] < threshold) continue;
    out.frames.push_back(t);
    if (!out.runs.empty() && out.runs.back().end() == t) {
      ++out.runs.back().count;
    } else {
      out.runs.push_back({t, 1});
    }
  }
  return out;
}

FrameRun strongest_run(const DetectionTrace& trace, const FrameSelection& selection) {
  FrameRun best;
  double best_score = -1.0;
  for (const FrameRun& run : selection.runs) {
    const double peak = *std::max_element(trace.scores.begin() + run.first, trace.scores.begin() + run.end());
    if (peak > best_score) {
      best_score = peak;
      best = run;
    }
  }
  return best;
}

Message decode_filtered(const DetectionTrace& trace, const FrameSelection& selection) {
  if (trace.window_bands.empty()) throw Error(Errc::InvalidArgument, "trace holds no windows");
  std::vector<bool> kept(trace.scores.size(), false);
  for (int t : selection.frames) kept[t] = true;

  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < trace.window_starts.size(); ++i) {
    const int first = trace.window_starts[i];
    if (std::all_of(kept.begin() + first, kept.begin() + first + trace.window_len, [](bool k) { return k; })) {
      inside.push_back(i);
    }
  }
  auto stronger = [&](std::size_t a, std::size_t b) { return trace.window_stats[a] < trace.window_stats[b]; };
  if (inside.empty()) {
    std::vector<std::size_t> all(trace.window_starts.size());
    std::iota(all.begin(), all.end(), 0);
    inside.push_back(*std::max_element(all.begin(), all.end(), stronger));
  }
  const std::size_t anchor = *std::max_element(inside.begin(), inside.end(), stronger);
  const int phase = trace.window_starts[anchor] % trace.window_len;

  ExtractionResult pooled;
  int pooled_windows = 0;
  for (std::size_t i : inside) {
    if (trace.window_starts[i] % trace.window_len != phase) continue;
    const auto& bands = trace.window_bands[i];
    if (pooled.per_band_scores.empty()) {
      pooled.per_band_scores = bands;
    } else {
      for (std::size_t bit = 0; bit < bands.size(); ++bit)
        for (std::size_t b = 0; b < bands[bit].size(); ++b) pooled.per_band_scores[bit][b] += bands[bit][b];
    }
    ++pooled_windows;
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(pooled_windows));
  for (auto& row : pooled.per_band_scores)
    for (double& z : row) z *= scale;
  combine_bands(pooled);
  return pooled.message;
}

Message decode_all(const DetectionTrace& trace) {
  FrameSelection everything;
  everything.frames.resize(trace.scores.size());
  std::iota(everything.frames.begin(), everything.frames.end(), 0);
  everything.runs.push_back({0, static_cast<int>(trace.scores.size())});
  return decode_filtered(trace, everything);
}

double interval_iou(FrameRun a, FrameRun b) {
  const int inter = std::max(0, std::min(a.end(), b.end()) - std::max(a.first, b.first));
  const int uni = a.count + b.count - inter;
  return uni > 0 ? static_cast<double>(inter) / uni : 0.0;
}

Region editing_patch_region(int height, int width) {
  if (height < kPatchSide + 2 * kPatchMargin || width < kPatchSide + 2 * kPatchMargin) {
    throw Error(Errc::BadGeometry, "frame too small for the patch");
  }
  return {kPatchMargin, height - kPatchMargin - kPatchSide, kPatchSide, kPatchSide};
}

VideoClip prepare_patch(const VideoClip& wm_source, std::uint64_t seed) {
  if (wm_source.frames() < kInsertFrames || wm_source.height() < kPatchSide || wm_source.width() < kPatchSide) {
    throw Error(Errc::BadGeometry, "watermarked source must be at least 16x128x128, got " +
                                       to_string(wm_source.shape()));
  }
  VideoClip patch = wm_source.slice_frames(0, kInsertFrames)
                        .crop((wm_source.width() - kPatchSide) / 2, (wm_source.height() - kPatchSide) / 2,
                              kPatchSide, kPatchSide);
  Rng rng(derive_seed(seed, 0x5A7));
  return saturate(convert_colorspace(patch, ColorSpace::RGB), rng.uniform(0.5, 1.5));
}

void paste_frame(std::span<double> frame, int width, std::span<const double> patch_frame, const Region& where) {
  for (int y = 0; y < where.height; ++y) {
    const double* src = patch_frame.data() + static_cast<std::size_t>(y) * where.width * 3;
    double* dst = frame.data() + (static_cast<std::size_t>(where.y0 + y) * width + where.x0) * 3;
    std::copy(src, src + static_cast<std::size_t>(where.width) * 3, dst);
  }
}

EditingScenario make_editing_scenario(const VideoClip& background, const VideoClip& wm_source, int insert_at,
                                      std::uint64_t seed) {
  if (background.width() < kMinBackgroundWidth || background.height() < kMinBackgroundHeight) {
    throw Error(Errc::BadGeometry, "background must be at least 462x240, got " + to_string(background.shape()));
  }
  if (insert_at < 0 || insert_at + kInsertFrames > background.frames()) {
    throw Error(Errc::BadGeometry, "insert range [" + std::to_string(insert_at) + ", " +
                                       std::to_string(insert_at + kInsertFrames) + ") outside the background");
  }
  EditingScenario out;
  out.composite = convert_colorspace(background, ColorSpace::RGB);
  out.patch = editing_patch_region(background.height(), background.width());
  out.watermarked = {insert_at, kInsertFrames};
  const VideoClip patch = prepare_patch(wm_source, seed);
  for (int t = 0; t < kInsertFrames; ++t) {
    paste_frame(out.composite.frame(insert_at + t), out.composite.width(), patch.frame(t), out.patch);
  }
  out.labels.assign(background.frames(), false);
  std::fill(out.labels.begin() + insert_at, out.labels.begin() + insert_at + kInsertFrames, true);
  return out;
}

}  // namespace vidmark
