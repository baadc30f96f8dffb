#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "vidmark/clip.hpp"

namespace vidmark {

namespace attack {
struct Identity {};
// Each frame dropped independently with probability p and replaced by the
// nearest earlier retained frame (freeze); length is preserved.
struct FrameDrop {
  double p = 0.5;
};
// For each even t, frames (t, t+1) swap with probability p.
struct FrameSwap {
  double p = 0.5;
};
// Centred temporal box average over n frames, symmetric boundary.
struct FrameAverage {
  int n = 3;
};
// Random non-trivial cyclic shift of the temporal order.
struct FrameShift {};
// Crop-out: a box of width ratio * W (aspect preserved) stays in place,
// everything else turns black.
struct Crop {
  double ratio = 0.4;
};
struct GaussianBlur3D {
  double sigma = 2.0;
  int spatial_kernel = 5;
  int temporal_kernel = 3;
};
struct GaussianNoise {
  double stddev = 0.04;
};
// Hue rotation by an angle uniform in [-strength * 90, strength * 90] degrees.
struct Hue {
  double strength = 1.0;
};
// Blend with the luma image by a factor uniform in [lo, hi].
struct Saturation {
  double lo = 0.5;
  double hi = 1.5;
};
// 8x8 block DCT with Annex K tables scaled by quality, no chroma subsampling.
struct JpegProxy {
  int quality = 50;
};
// 3D FFT; coefficients outside the centred cube of relative width fraction
// are zeroed.
struct FreqTruncate {
  double fraction = 0.5;
};
// Round trip through an external encoder.
struct ExternalCodec {
  int crf = 22;
};
}  // namespace attack

using Attack = std::variant<attack::Identity, attack::FrameDrop, attack::FrameSwap, attack::FrameAverage,
                            attack::FrameShift, attack::Crop, attack::GaussianBlur3D, attack::GaussianNoise,
                            attack::Hue, attack::Saturation, attack::JpegProxy, attack::FreqTruncate,
                            attack::ExternalCodec>;

struct DistortionSpec {
  Attack attack;
  std::uint64_t seed = 0;

  std::string kind() const;
  // The headline parameter used in reports (p, ratio, sigma, std, ...).
  double strength() const;
  bool operator==(const DistortionSpec& other) const;
};

// Throws InvalidArgument when a parameter is out of range.
void validate(const DistortionSpec& spec);

nlohmann::json to_json(const DistortionSpec& spec);
DistortionSpec distortion_from_json(const nlohmann::json& j);
// Compact form "kind[:value]" such as "noise:0.04", "crop:0.4", "h264:22".
DistortionSpec parse_distortion(std::string_view text, std::uint64_t seed = 0);

// External encoder bridge. The command template must read {in} (a Y4M file)
// and leave a decoded Y4M at {out}; {crf} and {work} (a scratch directory)
// are also substituted.
struct CodecConfig {
  std::string command =
      "ffmpeg -nostdin -y -loglevel error -i {in} -c:v libx264 -preset medium -crf {crf} {work}/enc.mp4 && "
      "ffmpeg -nostdin -y -loglevel error -i {work}/enc.mp4 -pix_fmt yuv444p -f yuv4mpegpipe {out}";
  bool strict = true;

  // Applies VIDMARK_CODEC_CMD when set.
  static CodecConfig from_environment();
};

bool codec_available(const CodecConfig& config);

VideoClip external_codec(const VideoClip& clip, int crf, const CodecConfig& config);

// Deterministic in (clip, spec) for every kind except ExternalCodec. Output
// has the input's shape and is clamped to [0, 1]. Without a codec config,
// ExternalCodec uses CodecConfig::from_environment(); in non-strict mode an
// unavailable encoder leaves the clip unchanged.
VideoClip apply(const VideoClip& clip, const DistortionSpec& spec, const CodecConfig* codec = nullptr);

// Uniform choice from the pool; the chosen spec's seed is replaced by one
// derived from `seed`.
DistortionSpec sample_random(const std::vector<DistortionSpec>& pool, std::uint64_t seed);
std::size_t sample_index(std::size_t pool_size, std::uint64_t seed);

// Building blocks exposed for tests and the editing scenario.
std::vector<bool> frame_drop_mask(int frames, double p, std::uint64_t seed);  // true = retained
VideoClip frame_shift(const VideoClip& clip, int offset);
int frame_shift_offset(int frames, std::uint64_t seed);
VideoClip saturate(const VideoClip& clip, double factor);
std::vector<double> gaussian_kernel(double sigma, int size);
double jpeg_quant_scale(int quality);
// Ten-attack pool: frame drop/swap/shift, crop, hue, saturation, 3D blur,
// noise, JPEG proxy, and frequency truncation standing in for a learned
// compression model.
std::vector<DistortionSpec> default_attack_pool();

namespace kernels {
VideoClip gaussian_blur3d(const VideoClip& clip, std::span<const double> temporal, std::span<const double> spatial);
VideoClip jpeg_roundtrip(const VideoClip& clip, int quality);
}  // namespace kernels

}  // namespace vidmark
