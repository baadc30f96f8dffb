#include "vidmark/clip.hpp"

#include <algorithm>
#include <cmath>

#include "vidmark/error.hpp"

namespace vidmark {

std::string_view to_string(ColorSpace cs) { return cs == ColorSpace::RGB ? "RGB" : "YUV"; }

ColorSpace parse_colorspace(std::string_view text) {
  if (text == "RGB" || text == "rgb") return ColorSpace::RGB;
  if (text == "YUV" || text == "yuv") return ColorSpace::YUV;
  throw Error(Errc::InvalidArgument, "unknown colorspace '" + std::string(text) + "'");
}

std::string to_string(const ClipShape& shape) {
  return std::to_string(shape.frames) + "x" + std::to_string(shape.height) + "x" + std::to_string(shape.width);
}

Volume::Volume(int frames, int height, int width, double fill)
    : frames_(frames), height_(height), width_(width) {
  if (frames < 0 || height < 0 || width < 0) throw Error(Errc::BadShape, "negative volume extent");
  data_.assign(static_cast<std::size_t>(frames) * height * width, fill);
}

void validate_shape(const ClipShape& shape) {
  if (shape.frames < 1 || shape.height < VideoClip::kMinSide || shape.width < VideoClip::kMinSide) {
    throw Error(Errc::BadShape, "clip must be at least 1x8x8, got " + to_string(shape));
  }
}

VideoClip::VideoClip(ClipShape shape, ColorSpace cs, double frame_rate)
    : shape_(shape), colorspace_(cs), frame_rate_(frame_rate) {
  validate_shape(shape);
  samples_.assign(shape.samples(), 0.0);
}

VideoClip VideoClip::filled(ClipShape shape, double value, ColorSpace cs) {
  VideoClip clip(shape, cs);
  std::fill(clip.samples_.begin(), clip.samples_.end(), value);
  return clip;
}

std::span<double> VideoClip::frame(int t) {
  return std::span<double>(samples_).subspan(shape_.samples_per_frame() * t, shape_.samples_per_frame());
}

std::span<const double> VideoClip::frame(int t) const {
  return std::span<const double>(samples_).subspan(shape_.samples_per_frame() * t, shape_.samples_per_frame());
}

void VideoClip::clamp() {
  for (double& s : samples_) s = std::clamp(s, 0.0, 1.0);
}

bool VideoClip::in_unit_range() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](double s) { return std::isfinite(s) && s >= 0.0 && s <= 1.0; });
}

VideoClip VideoClip::slice_frames(int first, int count) const {
  if (first < 0 || count < 1 || first + count > shape_.frames) {
    throw Error(Errc::InvalidArgument, "frame slice out of range");
  }
  VideoClip out({count, shape_.height, shape_.width}, colorspace_, frame_rate_);
  const auto begin = samples_.begin() + static_cast<std::ptrdiff_t>(shape_.samples_per_frame() * first);
  std::copy(begin, begin + static_cast<std::ptrdiff_t>(shape_.samples_per_frame() * count), out.samples_.begin());
  return out;
}

VideoClip VideoClip::crop(int x0, int y0, int w, int h) const {
  if (x0 < 0 || y0 < 0 || x0 + w > shape_.width || y0 + h > shape_.height) {
    throw Error(Errc::BadGeometry, "crop window outside the frame");
  }
  VideoClip out({shape_.frames, h, w}, colorspace_, frame_rate_);
  for (int t = 0; t < shape_.frames; ++t) {
    for (int y = 0; y < h; ++y) {
      const auto src = samples_.begin() + static_cast<std::ptrdiff_t>(index(t, y0 + y, x0, 0));
      std::copy(src, src + static_cast<std::ptrdiff_t>(w) * ClipShape::channels,
                out.samples_.begin() + static_cast<std::ptrdiff_t>(out.index(t, y, 0, 0)));
    }
  }
  return out;
}

namespace {
constexpr double kKr = 0.299;
constexpr double kKb = 0.114;
constexpr double kKg = 1.0 - kKr - kKb;
constexpr double kCb = 2.0 * (1.0 - kKb);  // 1.772
constexpr double kCr = 2.0 * (1.0 - kKr);  // 1.402
// Neutral chroma sits on code 128 so achromatic pixels survive 8-bit storage.
constexpr double kChromaZero = 128.0 / 255.0;
}  // namespace

Yuv rgb_to_yuv(Rgb p) {
  const double y = kKr * p.r + kKg * p.g + kKb * p.b;
  return {y, kChromaZero + (p.b - y) / kCb, kChromaZero + (p.r - y) / kCr};
}

Rgb yuv_to_rgb(Yuv p) {
  const double r = p.y + kCr * (p.v - kChromaZero);
  const double b = p.y + kCb * (p.u - kChromaZero);
  const double g = (p.y - kKr * r - kKb * b) / kKg;
  return {r, g, b};
}

Hsv rgb_to_hsv(Rgb p) {
  const double hi = std::max({p.r, p.g, p.b});
  const double lo = std::min({p.r, p.g, p.b});
  const double delta = hi - lo;
  double h = 0.0;
  if (delta > 0.0) {
    if (hi == p.r) {
      h = 60.0 * std::fmod((p.g - p.b) / delta, 6.0);
    } else if (hi == p.g) {
      h = 60.0 * ((p.b - p.r) / delta + 2.0);
    } else {
      h = 60.0 * ((p.r - p.g) / delta + 4.0);
    }
    if (h < 0.0) h += 360.0;
  }
  const double s = hi > 0.0 ? delta / hi : 0.0;
  return {h, s, hi};
}

Rgb hsv_to_rgb(Hsv p) {
  double h = std::fmod(p.h, 360.0);
  if (h < 0.0) h += 360.0;
  const double c = p.v * p.s;
  const double x = c * (1.0 - std::fabs(std::fmod(h / 60.0, 2.0) - 1.0));
  const double m = p.v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h / 60.0)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  return {r + m, g + m, b + m};
}

VideoClip convert_colorspace(const VideoClip& clip, ColorSpace target) {
  VideoClip out = clip;
  if (clip.colorspace() == target) return out;
  out.set_colorspace(target);
  auto src = clip.samples();
  auto dst = out.samples();
  const std::size_t n = src.size() / 3;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = src[3 * i], b = src[3 * i + 1], c = src[3 * i + 2];
    if (target == ColorSpace::YUV) {
      const Yuv yuv = rgb_to_yuv({a, b, c});
      dst[3 * i] = yuv.y;
      dst[3 * i + 1] = yuv.u;
      dst[3 * i + 2] = yuv.v;
    } else {
      const Rgb rgb = yuv_to_rgb({a, b, c});
      dst[3 * i] = rgb.r;
      dst[3 * i + 1] = rgb.g;
      dst[3 * i + 2] = rgb.b;
    }
  }
  return out;
}

Volume luma(const VideoClip& clip) {
  Volume out(clip.frames(), clip.height(), clip.width());
  auto src = clip.samples();
  auto dst = out.data();
  if (clip.colorspace() == ColorSpace::YUV) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[3 * i];
  } else {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = rgb_luma(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
  }
  return out;
}

void add_to_luma(VideoClip& clip, const Volume& delta, double scale) {
  if (delta.frames() != clip.frames() || delta.height() != clip.height() || delta.width() != clip.width()) {
    throw Error(Errc::DimensionMismatch, "luma delta does not match clip");
  }
  auto dst = clip.samples();
  auto d = delta.data();
  if (clip.colorspace() == ColorSpace::YUV) {
    for (std::size_t i = 0; i < d.size(); ++i) dst[3 * i] += scale * d[i];
  } else {
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double step = scale * d[i];
      dst[3 * i] += step;
      dst[3 * i + 1] += step;
      dst[3 * i + 2] += step;
    }
  }
}

std::vector<SegmentRange> segment_ranges(int frames, const TileLayout& layout) {
  if (layout.segment_len < 2) throw Error(Errc::InvalidArgument, "segment_len must be >= 2");
  std::vector<SegmentRange> ranges;
  for (int first = 0; first < frames; first += layout.segment_len) {
    ranges.push_back({first, std::min(layout.segment_len, frames - first)});
  }
  return ranges;
}

std::vector<VideoClip> tile_temporal(const VideoClip& clip, const TileLayout& layout) {
  std::vector<VideoClip> segments;
  for (const auto& range : segment_ranges(clip.frames(), layout)) {
    VideoClip seg({layout.segment_len, clip.height(), clip.width()}, clip.colorspace(), clip.frame_rate());
    for (int t = 0; t < layout.segment_len; ++t) {
      const int src_t = range.first + std::min(t, range.count - 1);
      auto src = clip.frame(src_t);
      std::copy(src.begin(), src.end(), seg.frame(t).begin());
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

VideoClip untile_temporal(std::span<const VideoClip> segments, int frames) {
  if (segments.empty() || frames < 1) throw Error(Errc::InvalidArgument, "nothing to untile");
  const VideoClip& head = segments.front();
  VideoClip out({frames, head.height(), head.width()}, head.colorspace(), head.frame_rate());
  int t = 0;
  for (const auto& seg : segments) {
    if (seg.height() != head.height() || seg.width() != head.width()) {
      throw Error(Errc::DimensionMismatch, "segments differ in frame size");
    }
    for (int i = 0; i < seg.frames() && t < frames; ++i, ++t) {
      auto src = seg.frame(i);
      std::copy(src.begin(), src.end(), out.frame(t).begin());
    }
  }
  if (t != frames) throw Error(Errc::DimensionMismatch, "segments hold fewer frames than requested");
  return out;
}

}  // namespace vidmark
