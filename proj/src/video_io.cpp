#include "vidmark/video_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "vidmark/error.hpp"

namespace vidmark {

namespace fs = std::filesystem;

VideoFormat parse_video_format(std::string_view text) {
  if (text == "y4m" || text == "Y4M") return VideoFormat::Y4M;
  if (text == "framedir" || text == "FrameDir" || text == "frames") return VideoFormat::FrameDir;
  if (text == "raw" || text == "RawPlanar" || text == "rawplanar") return VideoFormat::RawPlanar;
  throw Error(Errc::UnsupportedFormat, "unknown video format '" + std::string(text) + "'");
}

std::string_view to_string(VideoFormat format) {
  switch (format) {
    case VideoFormat::Y4M: return "y4m";
    case VideoFormat::FrameDir: return "framedir";
    case VideoFormat::RawPlanar: return "raw";
  }
  return "?";
}

VideoFormat guess_video_format(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".y4m") return VideoFormat::Y4M;
  if (ext == ".raw" || ext == ".bin") return VideoFormat::RawPlanar;
  return VideoFormat::FrameDir;
}

fs::path raw_sidecar_path(const fs::path& data_path) {
  fs::path side = data_path;
  side += ".json";
  return side;
}

namespace {

std::vector<unsigned char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoFailure, "short write to " + path.string());
}

// ---------------------------------------------------------------- Y4M

struct Y4mHeader {
  int width = 0;
  int height = 0;
  int fps_num = 25;
  int fps_den = 1;
  std::string chroma = "420jpeg";
};

Y4mHeader parse_y4m_header(const std::string& line) {
  std::istringstream tokens(line);
  std::string magic;
  tokens >> magic;
  if (magic != "YUV4MPEG2") throw Error(Errc::CorruptHeader, "missing YUV4MPEG2 signature");
  Y4mHeader h;
  for (std::string tok; tokens >> tok;) {
    const char tag = tok[0];
    const std::string value = tok.substr(1);
    try {
      switch (tag) {
        case 'W': h.width = std::stoi(value); break;
        case 'H': h.height = std::stoi(value); break;
        case 'F': {
          const auto colon = value.find(':');
          if (colon == std::string::npos) throw Error(Errc::CorruptHeader, "bad frame rate " + value);
          h.fps_num = std::stoi(value.substr(0, colon));
          h.fps_den = std::stoi(value.substr(colon + 1));
          break;
        }
        case 'C': h.chroma = value; break;
        default: break;  // I, A, X: ignored
      }
    } catch (const std::logic_error&) {
      throw Error(Errc::CorruptHeader, "bad header token " + tok);
    }
  }
  if (h.width <= 0 || h.height <= 0) throw Error(Errc::CorruptHeader, "missing W/H in Y4M header");
  return h;
}

VideoClip load_y4m(const fs::path& path) {
  const auto bytes = read_file(path);
  const auto eol = std::find(bytes.begin(), bytes.end(), '\n');
  if (eol == bytes.end()) throw Error(Errc::CorruptHeader, "unterminated Y4M header");
  const Y4mHeader h = parse_y4m_header(std::string(bytes.begin(), eol));

  const int w = h.width, ht = h.height;
  int cw = w, ch = ht;
  bool mono = false;
  if (h.chroma.rfind("420", 0) == 0) {
    cw = (w + 1) / 2;
    ch = (ht + 1) / 2;
  } else if (h.chroma == "422") {
    cw = (w + 1) / 2;
  } else if (h.chroma == "mono") {
    mono = true;
    cw = ch = 0;
  } else if (h.chroma != "444") {
    throw Error(Errc::UnsupportedFormat, "unsupported Y4M chroma C" + h.chroma);
  }
  const std::size_t luma_size = static_cast<std::size_t>(w) * ht;
  const std::size_t chroma_size = static_cast<std::size_t>(cw) * ch;
  const std::size_t frame_size = luma_size + 2 * chroma_size;

  std::vector<const unsigned char*> frames;
  auto pos = eol + 1;
  while (pos != bytes.end()) {
    const auto line_end = std::find(pos, bytes.end(), '\n');
    if (line_end == bytes.end() || std::string(pos, std::min(pos + 5, line_end)) != "FRAME") {
      throw Error(Errc::CorruptHeader, "expected FRAME marker");
    }
    pos = line_end + 1;
    if (static_cast<std::size_t>(bytes.end() - pos) < frame_size) {
      throw Error(Errc::DimensionMismatch, "truncated frame data");
    }
    frames.push_back(&*pos);
    pos += static_cast<std::ptrdiff_t>(frame_size);
  }
  if (frames.empty()) throw Error(Errc::CorruptHeader, "Y4M stream holds no frames");

  VideoClip clip({static_cast<int>(frames.size()), ht, w}, ColorSpace::YUV,
                 static_cast<double>(h.fps_num) / std::max(1, h.fps_den));
  const int sx = cw > 0 ? (w + cw - 1) / cw : 1;
  const int sy = ch > 0 ? (ht + ch - 1) / ch : 1;
  for (int t = 0; t < clip.frames(); ++t) {
    const unsigned char* yp = frames[t];
    const unsigned char* up = yp + luma_size;
    const unsigned char* vp = up + chroma_size;
    for (int y = 0; y < ht; ++y) {
      for (int x = 0; x < w; ++x) {
        clip.at(t, y, x, 0) = yp[static_cast<std::size_t>(y) * w + x] / 255.0;
        if (mono) {
          clip.at(t, y, x, 1) = clip.at(t, y, x, 2) = 128.0 / 255.0;
        } else {
          const std::size_t ci = static_cast<std::size_t>(y / sy) * cw + x / sx;
          clip.at(t, y, x, 1) = up[ci] / 255.0;
          clip.at(t, y, x, 2) = vp[ci] / 255.0;
        }
      }
    }
  }
  return clip;
}

std::pair<long, long> rational_rate(double fps) {
  if (!(fps > 0.0)) return {25, 1};
  const double rounded = std::round(fps);
  if (std::fabs(fps - rounded) < 1e-9) return {static_cast<long>(rounded), 1};
  long num = std::lround(fps * 1000.0);
  long den = 1000;
  const long g = std::gcd(num, den);
  return {num / g, den / g};
}

void save_y4m(const VideoClip& input, const fs::path& path, const IoOptions& options) {
  const VideoClip clip = convert_colorspace(input, ColorSpace::YUV);
  const int w = clip.width(), ht = clip.height();
  const bool sub = options.y4m_chroma == Y4mChroma::C420;
  const int cw = sub ? (w + 1) / 2 : w;
  const int ch = sub ? (ht + 1) / 2 : ht;
  const auto [num, den] = rational_rate(clip.frame_rate());

  std::string out = "YUV4MPEG2 W" + std::to_string(w) + " H" + std::to_string(ht) + " F" + std::to_string(num) + ":" +
                    std::to_string(den) + " Ip A1:1 C" + (sub ? "420jpeg" : "444") + "\n";
  out.reserve(out.size() + clip.frames() * (6 + static_cast<std::size_t>(w) * ht + 2ull * cw * ch));
  for (int t = 0; t < clip.frames(); ++t) {
    out += "FRAME\n";
    for (int y = 0; y < ht; ++y)
      for (int x = 0; x < w; ++x) out += static_cast<char>(quantize8(clip.at(t, y, x, 0)));
    for (int c = 1; c <= 2; ++c) {
      for (int y = 0; y < ch; ++y) {
        for (int x = 0; x < cw; ++x) {
          if (!sub) {
            out += static_cast<char>(quantize8(clip.at(t, y, x, c)));
            continue;
          }
          double acc = 0.0;
          int n = 0;
          for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx)
              if (2 * y + dy < ht && 2 * x + dx < w) {
                acc += clip.at(t, 2 * y + dy, 2 * x + dx, c);
                ++n;
              }
          out += static_cast<char>(quantize8(acc / n));
        }
      }
    }
  }
  write_file(path, out);
}

// ---------------------------------------------------------------- PPM / PNG

struct Image8 {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> rgb;  // interleaved RGB
};

Image8 read_pnm(const fs::path& path) {
  const auto bytes = read_file(path);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw Error(Errc::CorruptHeader, "bad PNM header in " + path.string());
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) v = v * 10 + (bytes[pos++] - '0');
    return static_cast<int>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
    throw Error(Errc::UnsupportedFormat, "only binary P5/P6 supported: " + path.string());
  }
  const bool gray = bytes[1] == '5';
  pos = 2;
  Image8 img;
  img.width = read_int();
  img.height = read_int();
  const int maxval = read_int();
  if (maxval != 255) throw Error(Errc::UnsupportedFormat, "PNM maxval must be 255: " + path.string());
  ++pos;  // single whitespace before raster
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (bytes.size() - std::min(pos, bytes.size()) < n * (gray ? 1 : 3)) {
    throw Error(Errc::DimensionMismatch, "truncated raster in " + path.string());
  }
  img.rgb.resize(n * 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) img.rgb[3 * i + c] = gray ? bytes[pos + i] : bytes[pos + 3 * i + c];
  }
  return img;
}

Image8 read_png(const fs::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(Errc::CorruptHeader, "cannot parse PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  Image8 img;
  img.width = static_cast<int>(image.width);
  img.height = static_cast<int>(image.height);
  img.rgb.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, img.rgb.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(Errc::CorruptHeader, "cannot decode PNG " + path.string() + ": " + image.message);
  }
  return img;
}

void write_ppm(const fs::path& path, const Image8& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  write_file(path, out);
}

void write_png(const fs::path& path, const Image8& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.rgb.data(), 0, nullptr)) {
    throw Error(Errc::IoFailure, "cannot write PNG " + path.string() + ": " + image.message);
  }
}

bool is_frame_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".ppm" || ext == ".pgm" || ext == ".png";
}

VideoClip load_frame_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(Errc::IoFailure, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_frame_file(entry.path())) files.push_back(entry.path());
  }
  if (files.empty()) throw Error(Errc::UnsupportedFormat, "no PPM/PGM/PNG frames in " + dir.string());
  std::sort(files.begin(), files.end());

  VideoClip clip;
  for (std::size_t t = 0; t < files.size(); ++t) {
    const Image8 img = files[t].extension() == ".png" ? read_png(files[t]) : read_pnm(files[t]);
    if (t == 0) {
      clip = VideoClip({static_cast<int>(files.size()), img.height, img.width}, ColorSpace::RGB);
    } else if (img.width != clip.width() || img.height != clip.height()) {
      throw Error(Errc::DimensionMismatch, "frame " + files[t].string() + " differs in size");
    }
    auto dst = clip.frame(static_cast<int>(t));
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = img.rgb[i] / 255.0;
  }
  return clip;
}

void save_frame_dir(const VideoClip& input, const fs::path& dir, const IoOptions& options) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot create " + dir.string());
  const bool png = options.frame_extension == "png";
  if (!png && options.frame_extension != "ppm") {
    throw Error(Errc::UnsupportedFormat, "frame extension must be ppm or png");
  }
  const VideoClip clip = convert_colorspace(input, ColorSpace::RGB);
  Image8 img;
  img.width = clip.width();
  img.height = clip.height();
  img.rgb.resize(clip.shape().samples_per_frame());
  for (int t = 0; t < clip.frames(); ++t) {
    auto src = clip.frame(t);
    for (std::size_t i = 0; i < src.size(); ++i) img.rgb[i] = quantize8(src[i]);
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05d.%s", t, png ? "png" : "ppm");
    if (png) {
      write_png(dir / name, img);
    } else {
      write_ppm(dir / name, img);
    }
  }
}

// ---------------------------------------------------------------- raw planar

float to_little_endian(float v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    auto bits = std::bit_cast<std::uint32_t>(v);
    bits = (bits >> 24) | ((bits >> 8) & 0xff00u) | ((bits << 8) & 0xff0000u) | (bits << 24);
    return std::bit_cast<float>(bits);
  }
}

VideoClip load_raw(const fs::path& path) {
  const fs::path side = raw_sidecar_path(path);
  std::ifstream meta_in(side);
  if (!meta_in) throw Error(Errc::IoFailure, "missing sidecar " + side.string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptHeader, "bad sidecar " + side.string() + ": " + e.what());
  }
  ClipShape shape;
  std::string dtype, cs;
  double fps = 25.0;
  try {
    shape.frames = meta.at("t").get<int>();
    shape.height = meta.at("h").get<int>();
    shape.width = meta.at("w").get<int>();
    if (meta.at("c").get<int>() != 3) throw Error(Errc::UnsupportedFormat, "raw clips must have 3 channels");
    cs = meta.at("colorspace").get<std::string>();
    dtype = meta.value("dtype", std::string("f32"));
    fps = meta.value("frame_rate", 25.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptHeader, "incomplete sidecar " + side.string() + ": " + e.what());
  }
  if (dtype != "f32" && dtype != "u8") throw Error(Errc::UnsupportedFormat, "raw dtype must be f32 or u8");
  const auto bytes = read_file(path);
  const std::size_t sample_bytes = dtype == "f32" ? 4 : 1;
  if (bytes.size() != shape.samples() * sample_bytes) {
    throw Error(Errc::DimensionMismatch, "raw data size does not match sidecar dims");
  }
  VideoClip clip(shape, parse_colorspace(cs), fps);
  const std::size_t plane = shape.pixels_per_frame();
  for (int t = 0; t < shape.frames; ++t) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t p = 0; p < plane; ++p) {
        const std::size_t src = (static_cast<std::size_t>(t) * 3 + c) * plane + p;
        double v;
        if (sample_bytes == 4) {
          float f;
          std::memcpy(&f, bytes.data() + 4 * src, 4);
          v = to_little_endian(f);
        } else {
          v = bytes[src] / 255.0;
        }
        clip.samples()[(static_cast<std::size_t>(t) * plane + p) * 3 + c] = v;
      }
    }
  }
  return clip;
}

void save_raw(const VideoClip& clip, const fs::path& path, const IoOptions& options) {
  const bool f32 = options.raw_type == RawSampleType::F32;
  const ClipShape& shape = clip.shape();
  const std::size_t plane = shape.pixels_per_frame();
  std::string data;
  data.resize(shape.samples() * (f32 ? 4 : 1));
  for (int t = 0; t < shape.frames; ++t) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t p = 0; p < plane; ++p) {
        const std::size_t dst = (static_cast<std::size_t>(t) * 3 + c) * plane + p;
        const double v = clip.samples()[(static_cast<std::size_t>(t) * plane + p) * 3 + c];
        if (f32) {
          const float f = to_little_endian(static_cast<float>(v));
          std::memcpy(data.data() + 4 * dst, &f, 4);
        } else {
          data[dst] = static_cast<char>(quantize8(v));
        }
      }
    }
  }
  write_file(path, data);
  nlohmann::ordered_json meta = {{"t", shape.frames},
                                 {"h", shape.height},
                                 {"w", shape.width},
                                 {"c", 3},
                                 {"colorspace", std::string(to_string(clip.colorspace()))},
                                 {"dtype", f32 ? "f32" : "u8"},
                                 {"frame_rate", clip.frame_rate()}};
  write_file(raw_sidecar_path(path), meta.dump(2) + "\n");
}

}  // namespace

VideoClip load_clip(const fs::path& path, VideoFormat format) {
  if (!fs::exists(path)) throw Error(Errc::IoFailure, path.string() + " does not exist");
  switch (format) {
    case VideoFormat::Y4M: return load_y4m(path);
    case VideoFormat::FrameDir: return load_frame_dir(path);
    case VideoFormat::RawPlanar: return load_raw(path);
  }
  throw Error(Errc::UnsupportedFormat, "unknown format");
}

VideoClip load_clip(const fs::path& path) { return load_clip(path, guess_video_format(path)); }

void save_clip(const VideoClip& clip, const fs::path& path, VideoFormat format, const IoOptions& options) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  switch (format) {
    case VideoFormat::Y4M: save_y4m(clip, path, options); return;
    case VideoFormat::FrameDir: save_frame_dir(clip, path, options); return;
    case VideoFormat::RawPlanar: save_raw(clip, path, options); return;
  }
}

}  // namespace vidmark
