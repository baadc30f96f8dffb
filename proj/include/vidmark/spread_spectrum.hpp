#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vidmark/clip.hpp"
#include "vidmark/wavelet.hpp"

namespace vidmark {

struct Message {
  std::vector<std::uint8_t> bits;

  int size() const { return static_cast<int>(bits.size()); }
  static Message random(int m, std::uint64_t seed);
  static Message parse(std::string_view text);  // "0110..."
  std::string str() const;
  bool operator==(const Message&) const = default;
};

// Distribution of the detection statistic on unwatermarked content.
struct NullModel {
  double mean = 0.0;
  double stddev = 1.0;
  int samples = 0;
};

// Analytic null for m bits: mean |N(0,1)| and its standard error.
NullModel analytic_null(int m);

std::vector<BandCode> default_embedding_bands();

// Portable key description; chips and slot assignment are re-derived from
// the seed for a concrete clip shape and never stored.
struct KeySpec {
  static constexpr int kVersion = 1;

  std::uint64_t seed = 0;
  int payload = 96;
  int chip_len = 128;
  int level = 2;
  int levels = 3;
  std::vector<BandCode> bands = default_embedding_bands();
  std::optional<NullModel> null;

  nlohmann::json to_json() const;
  static KeySpec from_json(const nlohmann::json& j);
};

KeySpec load_key(const std::string& path);
void save_key(const KeySpec& spec, const std::string& path);

struct Slot {
  std::uint32_t index;  // flat position in the padded coefficient volume
  std::uint8_t band;    // index into KeySpec::bands
};

class WatermarkKey {
 public:
  WatermarkKey(KeySpec spec, int frames, int height, int width);

  const KeySpec& spec() const { return spec_; }
  int payload() const { return spec_.payload; }
  int chip_len() const { return spec_.chip_len; }
  int frames() const { return frames_; }
  int height() const { return height_; }
  int width() const { return width_; }
  int band_count() const { return static_cast<int>(spec_.bands.size()); }
  bool matches(const VideoClip& clip) const {
    return clip.frames() == frames_ && clip.height() == height_ && clip.width() == width_;
  }

  std::span<const std::int8_t> chips(int bit) const {
    return std::span<const std::int8_t>(chips_).subspan(static_cast<std::size_t>(bit) * spec_.chip_len, spec_.chip_len);
  }
  std::span<const Slot> slots(int bit) const {
    return std::span<const Slot>(slots_).subspan(static_cast<std::size_t>(bit) * spec_.chip_len, spec_.chip_len);
  }

  // Pixel-domain luma residual R for a message with unit gain: the inverse
  // transform of a pyramid holding gain * chip * (2b - 1) at every slot.
  Volume residual(const Message& msg, double gain = 1.0) const;

 private:
  KeySpec spec_;
  int frames_, height_, width_;
  std::vector<std::int8_t> chips_;
  std::vector<Slot> slots_;
};

// Total coefficients in the embedding bands at `level` for a clip shape
// (after padding to a multiple of 2^levels).
std::size_t embedding_slot_count(int frames, int height, int width, int level = 2, int levels = 3,
                                 int band_count = 6);
int capacity(int frames, int height, int width, int chip_len, int level = 2, int levels = 3);

// Throws PayloadTooLarge when payload * chip_len exceeds the slot budget.
WatermarkKey gen_key(const KeySpec& spec, int frames, int height, int width);
WatermarkKey gen_key(std::uint64_t seed, int payload, const ClipShape& shape, int chip_len);

struct EmbedOptions {
  double gain = 1.0;
  bool clamp = true;  // false only for linearity diagnostics
};

// V_w = V_in + alpha * R, R added to luma.
VideoClip embed(const VideoClip& cover, const Message& msg, const WatermarkKey& key, double alpha,
                const EmbedOptions& options = {});

struct ExtractionResult {
  Message message;
  std::vector<double> soft;                          // per bit
  std::vector<std::vector<double>> per_band_scores;  // [bit][band], normalized correlations
  std::vector<double> band_weights;                  // sum to 1
  double statistic = 0.0;                            // raw detection statistic
  double detection = 0.0;                            // in [0, 1]
};

// Blind: needs only the suspect clip and the key.
ExtractionResult extract(const VideoClip& suspect, const WatermarkKey& key, const NullModel* null = nullptr);

// Tiling protocol for clips longer than one segment: every segment carries
// the same message under a key built for segment_len x H x W. Extraction
// sums the per-band correlations over segments and rescales by
// 1/sqrt(segments), so the null distribution is unchanged.
VideoClip embed_segments(const VideoClip& cover, const Message& msg, const KeySpec& spec, double alpha,
                         const TileLayout& layout = {}, const EmbedOptions& options = {});
ExtractionResult extract_segments(const VideoClip& suspect, const KeySpec& spec, const TileLayout& layout = {},
                                  const NullModel* null = nullptr);

// Per-band normalized correlations -> combined soft decisions, weights and
// statistic. Exposed so multi-window decoders can reuse it.
void combine_bands(ExtractionResult& result);

// Logistic map of the standardized statistic z: 1 / (1 + exp(-(z - 5))).
// A score of 0.3 corresponds to z ~ 4.15, well out in the null tail even when
// a frame takes the max over several overlapping windows.
inline constexpr double kDetectionOffset = 5.0;
double detection_score(double statistic, const NullModel& null);
double standardized_statistic(double statistic, const NullModel& null);

}  // namespace vidmark
