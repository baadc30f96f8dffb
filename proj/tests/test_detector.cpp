#include "doctest.h"
#include "support.hpp"
#include "vidmark/detector.hpp"
#include "vidmark/error.hpp"
#include "vidmark/metrics.hpp"
#include "vidmark/synth.hpp"

using namespace vidmark;

namespace {

KeySpec small_spec() {
  KeySpec spec;
  spec.seed = 31;
  spec.payload = 32;
  spec.chip_len = 96;
  return spec;
}

}  // namespace

TEST_CASE("null calibration needs enough windows") {
  const WatermarkKey key = gen_key(small_spec(), 8, 64, 64);
  const auto few = synth_corpus(2, {16, 64, 64}, 3);
  CHECK_THROWS_AS(calibrate_null(key, few), Error);
  const auto many = synth_corpus(24, {8, 64, 64}, 3);
  const NullModel null = calibrate_null(key, many);
  CHECK(null.samples == 24);
  CHECK(null.stddev > 0.0);
  CHECK(null.mean > 0.5);
  CHECK(null.mean < 1.2);
}

TEST_CASE("detector localizes a watermarked run") {
  const KeySpec spec = small_spec();
  const WatermarkKey key = gen_key(spec, 8, 64, 64);
  const NullModel null = calibrate_null(key, synth_corpus(24, {8, 64, 64}, 4));
  const VideoClip bg = synth_clip({48, 64, 64}, 10);
  const Message msg = Message::random(32, 2);
  const VideoClip marked = embed_segments(synth_clip({16, 64, 64}, 11), msg, spec, 0.05);
  VideoClip video = bg;
  for (int t = 0; t < 16; ++t) {
    const auto src = marked.frame(t);
    std::copy(src.begin(), src.end(), video.frame(20 + t).begin());
  }
  const DetectionTrace trace = detect(video, key, null);
  REQUIRE(trace.scores.size() == 48);
  const FrameSelection kept = filter_frames(trace);
  const FrameRun run = strongest_run(trace, kept);
  CHECK(interval_iou(run, {20, 16}) >= 0.8);
  CHECK(decode_filtered(trace, kept) == msg);
  CHECK(trace.scores[2] < 0.3);
}

TEST_CASE("detector preconditions") {
  const WatermarkKey key = gen_key(small_spec(), 8, 64, 64);
  CHECK_THROWS_AS(detect(synth_clip({4, 64, 64}, 1), key, {}), Error);
  CHECK_THROWS_AS(detect(synth_clip({8, 64, 72}, 1), key, {}), Error);
  DetectOptions roi;
  roi.roi = Region{8, 0, 64, 64};
  CHECK_NOTHROW(detect(synth_clip({8, 64, 72}, 1), key, {}, roi));
}

TEST_CASE("interval iou") {
  CHECK(interval_iou({0, 10}, {0, 10}) == 1.0);
  CHECK(interval_iou({0, 10}, {10, 5}) == 0.0);
  CHECK(interval_iou({0, 10}, {5, 10}) == doctest::Approx(5.0 / 15.0));
}

TEST_CASE("editing scenario geometry") {
  const Region r = editing_patch_region(240, 462);
  CHECK(r == Region{4, 240 - 4 - 128, 128, 128});
  const VideoClip bg = synth_clip({60, 240, 462}, 1);
  const VideoClip src = synth_clip({16, 160, 160}, 2);
  const EditingScenario s = make_editing_scenario(bg, src, 20, 5);
  CHECK(s.composite.shape() == bg.shape());
  CHECK(s.watermarked.first == 20);
  CHECK(s.watermarked.count == kInsertFrames);
  int labelled = 0;
  for (bool b : s.labels) labelled += b;
  CHECK(labelled == 16);
  CHECK(s.composite.at(0, 0, 0, 0) == bg.at(0, 0, 0, 0));
  CHECK_THROWS_AS(make_editing_scenario(synth_clip({60, 120, 200}, 1), src, 20, 5), Error);
}

namespace {

struct Calibrated {
  KeySpec spec;
  WatermarkKey key;
  NullModel null;
};

Calibrated calibrated(int payload, int chip_len, int h, int w) {
  KeySpec spec;
  spec.seed = 71;
  spec.payload = payload;
  spec.chip_len = chip_len;
  WatermarkKey key = gen_key(spec, 8, h, w);
  const NullModel null = calibrate_null(key, synth_corpus(40, {8, h, w}, 900));
  return {spec, key, null};
}

}  // namespace

TEST_CASE("standardized null scores on fresh windows") {
  const Calibrated c = calibrated(96, 128, 128, 128);
  const auto fresh = synth_corpus(100, {8, 128, 128}, 901);
  double sum = 0, sq = 0;
  for (const auto& clip : fresh) {
    const double z = standardized_statistic(extract(clip, c.key).statistic, c.null);
    sum += z;
    sq += z * z;
  }
  const double mean = sum / 100, sd = std::sqrt(sq / 100 - mean * mean);
  CHECK(std::fabs(mean) <= 0.15);
  CHECK(std::fabs(sd - 1.0) <= 0.2);

  const NullModel again = calibrate_null(c.key, synth_corpus(40, {8, 128, 128}, 900));
  CHECK(again.mean == c.null.mean);
  CHECK(again.stddev == c.null.stddev);

  int strong = 0;
  for (int i = 0; i < 100; ++i) {
    const Message msg = Message::random(96, i);
    const ExtractionResult r = extract(embed(fresh[i], msg, c.key, 0.046), c.key);
    strong += standardized_statistic(r.statistic, c.null) > 3.0;
  }
  CHECK(strong >= 95);
}

TEST_CASE("frame scores on fully marked, unmarked and composite clips") {
  const Calibrated c = calibrated(96, 128, 128, 128);
  const Message msg = Message::random(96, 6);
  const VideoClip marked = embed_segments(synth_clip({32, 128, 128}, 3), msg, c.spec, 0.046);
  for (double s : detect(marked, c.key, c.null).scores) CHECK(s >= 0.9);

  const DetectionTrace clean = detect(synth_clip({64, 128, 128}, 4), c.key, c.null);
  int low = 0;
  for (double s : clean.scores) low += s <= 0.3;
  CHECK(low >= 0.95 * 64);

  VideoClip video = synth_clip({140, 128, 128}, 5);
  const VideoClip patch = embed_segments(synth_clip({16, 128, 128}, 6), msg, c.spec, 0.046);
  for (int t = 0; t < 16; ++t) {
    const auto src = patch.frame(t);
    std::copy(src.begin(), src.end(), video.frame(100 + t).begin());
  }
  const DetectionTrace trace = detect(video, c.key, c.null);
  const FrameRun run = strongest_run(trace, filter_frames(trace));
  CHECK(std::abs(run.first - 100) <= 8);
  CHECK(std::abs(run.end() - 116) <= 8);
}

TEST_CASE("frame filtering by threshold") {
  DetectionTrace t;
  t.scores = {1.0, 1.0, 1.0};
  CHECK(filter_frames(t).frames.size() == 3);
  t.scores = {0.0, 0.0};
  CHECK(filter_frames(t).frames.empty());
  t.scores = {0.1, 0.5, 0.6, 0.2};
  const FrameSelection s = filter_frames(t, 0.3);
  CHECK(s.frames == std::vector<int>{1, 2});
  REQUIRE(s.runs.size() == 1);
  CHECK(s.runs[0].first == 1);
  CHECK(s.runs[0].count == 2);
}

TEST_CASE("editing labels and patch area") {
  const EditingScenario s = make_editing_scenario(synth_clip({60, 240, 462}, 1), synth_clip({16, 128, 128}, 2), 20, 3);
  for (int t = 0; t < 60; ++t) CHECK(s.labels[t] == (t >= 20 && t < 36));
  CHECK(128.0 * 128.0 / (462.0 * 240.0) == doctest::Approx(0.148).epsilon(0.01));
  CHECK(128.0 * 128.0 / (864.0 * 480.0) == doctest::Approx(0.0395).epsilon(0.01));
  CHECK_THROWS_AS(make_editing_scenario(synth_clip({30, 240, 462}, 1), synth_clip({16, 128, 128}, 2), 20, 3), Error);
}
