#pragma once

#include <filesystem>
#include <string_view>

#include "vidmark/clip.hpp"

namespace vidmark {

enum class VideoFormat { Y4M, FrameDir, RawPlanar };

VideoFormat parse_video_format(std::string_view text);
std::string_view to_string(VideoFormat format);
// ".y4m" -> Y4M, ".raw"/".bin" -> RawPlanar, anything else (a directory) -> FrameDir.
VideoFormat guess_video_format(const std::filesystem::path& path);

enum class Y4mChroma { C444, C420 };
enum class RawSampleType { F32, U8 };

struct IoOptions {
  Y4mChroma y4m_chroma = Y4mChroma::C444;
  std::string frame_extension = "ppm";  // "ppm" or "png"
  RawSampleType raw_type = RawSampleType::F32;
};

// Y4M loads as a YUV clip, frame directories as RGB, raw planar files in
// whatever colorspace the sidecar declares. 8-bit sources map via v / 255.
VideoClip load_clip(const std::filesystem::path& path, VideoFormat format);
VideoClip load_clip(const std::filesystem::path& path);

// Y4M and frame directories are 8-bit: samples are clamped and rounded to
// the nearest code. Raw planar writes the sidecar at <path>.json.
void save_clip(const VideoClip& clip, const std::filesystem::path& path, VideoFormat format,
               const IoOptions& options = {});

std::filesystem::path raw_sidecar_path(const std::filesystem::path& data_path);

inline unsigned char quantize8(double v) {
  const double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  return static_cast<unsigned char>(c * 255.0 + 0.5);
}

}  // namespace vidmark
