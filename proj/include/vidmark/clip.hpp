#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vidmark {

enum class ColorSpace { RGB, YUV };

std::string_view to_string(ColorSpace cs);
ColorSpace parse_colorspace(std::string_view text);

struct ClipShape {
  int frames = 0;
  int height = 0;
  int width = 0;
  static constexpr int channels = 3;

  std::size_t pixels_per_frame() const { return static_cast<std::size_t>(height) * width; }
  std::size_t samples_per_frame() const { return pixels_per_frame() * channels; }
  std::size_t samples() const { return samples_per_frame() * frames; }

  bool operator==(const ClipShape&) const = default;
};

std::string to_string(const ClipShape& shape);

// Single-channel T x H x W real array. Used for luma planes and wavelet
// coefficients.
class Volume {
 public:
  Volume() = default;
  Volume(int frames, int height, int width, double fill = 0.0);

  int frames() const { return frames_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(int t, int y, int x) const {
    return (static_cast<std::size_t>(t) * height_ + y) * width_ + x;
  }
  double& operator()(int t, int y, int x) { return data_[index(t, y, x)]; }
  double operator()(int t, int y, int x) const { return data_[index(t, y, x)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Volume& other) const {
    return frames_ == other.frames_ && height_ == other.height_ && width_ == other.width_;
  }

 private:
  int frames_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// T x H x W x C clip with interleaved channels; samples nominally in [0, 1].
class VideoClip {
 public:
  static constexpr int kMinSide = 8;

  VideoClip() = default;
  VideoClip(ClipShape shape, ColorSpace cs = ColorSpace::RGB, double frame_rate = 25.0);

  static VideoClip filled(ClipShape shape, double value, ColorSpace cs = ColorSpace::RGB);

  const ClipShape& shape() const { return shape_; }
  int frames() const { return shape_.frames; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  ColorSpace colorspace() const { return colorspace_; }
  void set_colorspace(ColorSpace cs) { colorspace_ = cs; }
  double frame_rate() const { return frame_rate_; }
  void set_frame_rate(double fps) { frame_rate_ = fps; }

  std::size_t index(int t, int y, int x, int c) const {
    return ((static_cast<std::size_t>(t) * shape_.height + y) * shape_.width + x) * ClipShape::channels + c;
  }
  double& at(int t, int y, int x, int c) { return samples_[index(t, y, x, c)]; }
  double at(int t, int y, int x, int c) const { return samples_[index(t, y, x, c)]; }

  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }
  std::span<double> frame(int t);
  std::span<const double> frame(int t) const;

  void clamp();
  bool in_unit_range() const;

  // Frames [first, first + count) as a new clip.
  VideoClip slice_frames(int first, int count) const;
  // Spatial window, same frame count.
  VideoClip crop(int x0, int y0, int w, int h) const;

 private:
  ClipShape shape_;
  ColorSpace colorspace_ = ColorSpace::RGB;
  double frame_rate_ = 25.0;
  std::vector<double> samples_;
};

// Throws BadShape unless T >= 1, H >= 8, W >= 8.
void validate_shape(const ClipShape& shape);

// BT.601 full range. Chroma is offset by 128/255 so that YUV samples of an
// RGB clip in [0,1] also lie in [0,1] and neutral grey lands on an 8-bit code.
struct Rgb {
  double r, g, b;
};
struct Yuv {
  double y, u, v;
};
Yuv rgb_to_yuv(Rgb p);
Rgb yuv_to_rgb(Yuv p);
inline double rgb_luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

// HSV with hue in degrees [0, 360).
struct Hsv {
  double h, s, v;
};
Hsv rgb_to_hsv(Rgb p);
Rgb hsv_to_rgb(Hsv p);

VideoClip convert_colorspace(const VideoClip& clip, ColorSpace target);

Volume luma(const VideoClip& clip);
// Adds scale * delta to the luma of every pixel. For RGB clips the same
// amount goes to R, G and B, which leaves chroma untouched.
void add_to_luma(VideoClip& clip, const Volume& delta, double scale);

struct TileLayout {
  int segment_len = 8;
};

struct SegmentRange {
  int first = 0;
  int count = 0;  // frames taken from the source; the tile is padded to segment_len
};

std::vector<SegmentRange> segment_ranges(int frames, const TileLayout& layout);
// Every segment has exactly segment_len frames; the last one is padded by
// repeating the final source frame.
std::vector<VideoClip> tile_temporal(const VideoClip& clip, const TileLayout& layout);
VideoClip untile_temporal(std::span<const VideoClip> segments, int frames);

}  // namespace vidmark
