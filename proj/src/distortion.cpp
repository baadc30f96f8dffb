#include "vidmark/distortion.hpp"

#include <fftw3.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <sstream>

#include "vidmark/error.hpp"
#include "vidmark/rng.hpp"
#include "vidmark/video_io.hpp"

namespace vidmark {

namespace fs = std::filesystem;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::InvalidArgument, what);
}

}  // namespace

std::string DistortionSpec::kind() const {
  return std::visit(Overloaded{
                        [](const attack::Identity&) { return "Identity"; },
                        [](const attack::FrameDrop&) { return "FrameDrop"; },
                        [](const attack::FrameSwap&) { return "FrameSwap"; },
                        [](const attack::FrameAverage&) { return "FrameAverage"; },
                        [](const attack::FrameShift&) { return "FrameShift"; },
                        [](const attack::Crop&) { return "Crop"; },
                        [](const attack::GaussianBlur3D&) { return "GaussianBlur3D"; },
                        [](const attack::GaussianNoise&) { return "GaussianNoise"; },
                        [](const attack::Hue&) { return "Hue"; },
                        [](const attack::Saturation&) { return "Saturation"; },
                        [](const attack::JpegProxy&) { return "JpegProxy"; },
                        [](const attack::FreqTruncate&) { return "FreqTruncate"; },
                        [](const attack::ExternalCodec&) { return "ExternalCodec"; },
                    },
                    attack);
}

double DistortionSpec::strength() const {
  return std::visit(Overloaded{
                        [](const attack::Identity&) { return 0.0; },
                        [](const attack::FrameDrop& a) { return a.p; },
                        [](const attack::FrameSwap& a) { return a.p; },
                        [](const attack::FrameAverage& a) { return static_cast<double>(a.n); },
                        [](const attack::FrameShift&) { return 0.0; },
                        [](const attack::Crop& a) { return a.ratio; },
                        [](const attack::GaussianBlur3D& a) { return a.sigma; },
                        [](const attack::GaussianNoise& a) { return a.stddev; },
                        [](const attack::Hue& a) { return a.strength; },
                        [](const attack::Saturation& a) { return (a.hi - a.lo) / 2.0; },
                        [](const attack::JpegProxy& a) { return static_cast<double>(a.quality); },
                        [](const attack::FreqTruncate& a) { return a.fraction; },
                        [](const attack::ExternalCodec& a) { return static_cast<double>(a.crf); },
                    },
                    attack);
}

bool DistortionSpec::operator==(const DistortionSpec& other) const {
  return seed == other.seed && to_json(*this) == to_json(other);
}

void validate(const DistortionSpec& spec) {
  std::visit(Overloaded{
                 [](const attack::Identity&) {},
                 [](const attack::FrameDrop& a) { require(a.p >= 0.0 && a.p <= 1.0, "FrameDrop p must be in [0,1]"); },
                 [](const attack::FrameSwap& a) { require(a.p >= 0.0 && a.p <= 1.0, "FrameSwap p must be in [0,1]"); },
                 [](const attack::FrameAverage& a) { require(a.n >= 1, "FrameAverage n must be >= 1"); },
                 [](const attack::FrameShift&) {},
                 [](const attack::Crop& a) { require(a.ratio > 0.0 && a.ratio <= 1.0, "Crop ratio must be in (0,1]"); },
                 [](const attack::GaussianBlur3D& a) {
                   require(a.sigma > 0.0, "blur sigma must be > 0");
                   require(a.spatial_kernel >= 1 && a.spatial_kernel % 2 == 1, "spatial kernel must be odd");
                   require(a.temporal_kernel >= 1 && a.temporal_kernel % 2 == 1, "temporal kernel must be odd");
                 },
                 [](const attack::GaussianNoise& a) { require(a.stddev >= 0.0, "noise std must be >= 0"); },
                 [](const attack::Hue& a) { require(a.strength >= 0.0, "hue strength must be >= 0"); },
                 [](const attack::Saturation& a) {
                   require(a.lo >= 0.0 && a.hi >= a.lo, "saturation range must satisfy 0 <= lo <= hi");
                 },
                 [](const attack::JpegProxy& a) { require(a.quality >= 1 && a.quality <= 100, "JPEG quality in [1,100]"); },
                 [](const attack::FreqTruncate& a) {
                   require(a.fraction > 0.0 && a.fraction <= 1.0, "truncation fraction must be in (0,1]");
                 },
                 [](const attack::ExternalCodec& a) { require(a.crf >= 0 && a.crf <= 63, "CRF must be in [0,63]"); },
             },
             spec.attack);
}

nlohmann::json to_json(const DistortionSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = spec.kind();
  std::visit(Overloaded{
                 [](const attack::Identity&) {},
                 [&](const attack::FrameDrop& a) { j["p"] = a.p; },
                 [&](const attack::FrameSwap& a) { j["p"] = a.p; },
                 [&](const attack::FrameAverage& a) { j["n"] = a.n; },
                 [](const attack::FrameShift&) {},
                 [&](const attack::Crop& a) { j["ratio"] = a.ratio; },
                 [&](const attack::GaussianBlur3D& a) {
                   j["sigma"] = a.sigma;
                   j["spatial_kernel"] = a.spatial_kernel;
                   j["temporal_kernel"] = a.temporal_kernel;
                 },
                 [&](const attack::GaussianNoise& a) { j["std"] = a.stddev; },
                 [&](const attack::Hue& a) { j["strength"] = a.strength; },
                 [&](const attack::Saturation& a) {
                   j["lo"] = a.lo;
                   j["hi"] = a.hi;
                 },
                 [&](const attack::JpegProxy& a) { j["quality"] = a.quality; },
                 [&](const attack::FreqTruncate& a) { j["fraction"] = a.fraction; },
                 [&](const attack::ExternalCodec& a) { j["crf"] = a.crf; },
             },
             spec.attack);
  j["seed"] = spec.seed;
  return j;
}

DistortionSpec distortion_from_json(const nlohmann::json& j) {
  DistortionSpec spec;
  try {
    const auto kind = j.at("kind").get<std::string>();
    spec.seed = j.value("seed", std::uint64_t{0});
    if (kind == "Identity") {
      spec.attack = attack::Identity{};
    } else if (kind == "FrameDrop") {
      spec.attack = attack::FrameDrop{j.value("p", 0.5)};
    } else if (kind == "FrameSwap") {
      spec.attack = attack::FrameSwap{j.value("p", 0.5)};
    } else if (kind == "FrameAverage") {
      spec.attack = attack::FrameAverage{j.value("n", 3)};
    } else if (kind == "FrameShift") {
      spec.attack = attack::FrameShift{};
    } else if (kind == "Crop") {
      spec.attack = attack::Crop{j.value("ratio", 0.4)};
    } else if (kind == "GaussianBlur3D") {
      spec.attack = attack::GaussianBlur3D{j.value("sigma", 2.0), j.value("spatial_kernel", 5), j.value("temporal_kernel", 3)};
    } else if (kind == "GaussianNoise") {
      spec.attack = attack::GaussianNoise{j.value("std", 0.04)};
    } else if (kind == "Hue") {
      spec.attack = attack::Hue{j.value("strength", 1.0)};
    } else if (kind == "Saturation") {
      spec.attack = attack::Saturation{j.value("lo", 0.5), j.value("hi", 1.5)};
    } else if (kind == "JpegProxy") {
      spec.attack = attack::JpegProxy{j.value("quality", 50)};
    } else if (kind == "FreqTruncate") {
      spec.attack = attack::FreqTruncate{j.value("fraction", 0.5)};
    } else if (kind == "ExternalCodec") {
      spec.attack = attack::ExternalCodec{j.value("crf", 22)};
    } else {
      throw Error(Errc::ConfigInvalid, "unknown distortion kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("bad distortion: ") + e.what());
  }
  validate(spec);
  return spec;
}

DistortionSpec parse_distortion(std::string_view text, std::uint64_t seed) {
  const auto colon = text.find(':');
  const std::string name(text.substr(0, colon));
  const std::string arg = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
  auto num = [&](double fallback) {
    if (arg.empty()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return v;
    } catch (const std::logic_error&) {
      throw Error(Errc::ConfigInvalid, "bad distortion parameter '" + arg + "'");
    }
  };
  DistortionSpec spec;
  spec.seed = seed;
  if (name == "identity") {
    spec.attack = attack::Identity{};
  } else if (name == "drop") {
    spec.attack = attack::FrameDrop{num(0.5)};
  } else if (name == "swap") {
    spec.attack = attack::FrameSwap{num(0.5)};
  } else if (name == "average") {
    spec.attack = attack::FrameAverage{static_cast<int>(num(3))};
  } else if (name == "shift") {
    spec.attack = attack::FrameShift{};
  } else if (name == "crop") {
    spec.attack = attack::Crop{num(0.4)};
  } else if (name == "blur") {
    spec.attack = attack::GaussianBlur3D{num(2.0), 5, 3};
  } else if (name == "noise") {
    spec.attack = attack::GaussianNoise{num(0.04)};
  } else if (name == "hue") {
    spec.attack = attack::Hue{num(1.0)};
  } else if (name == "saturation") {
    const double half = num(0.5);
    spec.attack = attack::Saturation{1.0 - half, 1.0 + half};
  } else if (name == "jpeg") {
    spec.attack = attack::JpegProxy{static_cast<int>(num(50))};
  } else if (name == "truncate") {
    spec.attack = attack::FreqTruncate{num(0.5)};
  } else if (name == "h264" || name == "codec") {
    spec.attack = attack::ExternalCodec{static_cast<int>(num(22))};
  } else {
    throw Error(Errc::ConfigInvalid, "unknown distortion '" + name + "'");
  }
  validate(spec);
  return spec;
}

// ---------------------------------------------------------------- temporal

std::vector<bool> frame_drop_mask(int frames, double p, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x64726f70));
  std::vector<bool> keep(frames);
  for (int t = 0; t < frames; ++t) keep[t] = !rng.bernoulli(p);
  return keep;
}

namespace {

void copy_frame(const VideoClip& src, int from, VideoClip& dst, int to) {
  auto s = src.frame(from);
  std::copy(s.begin(), s.end(), dst.frame(to).begin());
}

VideoClip apply_frame_drop(const VideoClip& clip, double p, std::uint64_t seed) {
  const int n = clip.frames();
  std::vector<bool> keep = frame_drop_mask(n, p, seed);
  if (std::none_of(keep.begin(), keep.end(), [](bool k) { return k; })) keep[0] = true;
  VideoClip out = clip;
  int last = -1;
  for (int t = 0; t < n; ++t) {
    if (keep[t]) {
      last = t;
      continue;
    }
    int source = last;
    if (source < 0) {  // nothing retained yet: use the nearest later one
      source = t + 1;
      while (!keep[source]) ++source;
    }
    copy_frame(clip, source, out, t);
  }
  return out;
}

VideoClip apply_frame_swap(const VideoClip& clip, double p, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x73776170));
  VideoClip out = clip;
  for (int t = 0; t + 1 < clip.frames(); t += 2) {
    if (rng.bernoulli(p)) {
      copy_frame(clip, t, out, t + 1);
      copy_frame(clip, t + 1, out, t);
    }
  }
  return out;
}

int reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

VideoClip apply_frame_average(const VideoClip& clip, int n) {
  const int before = (n - 1) / 2;
  VideoClip out(clip.shape(), clip.colorspace(), clip.frame_rate());
  for (int t = 0; t < clip.frames(); ++t) {
    auto dst = out.frame(t);
    for (int k = 0; k < n; ++k) {
      auto src = clip.frame(reflect(t - before + k, clip.frames()));
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    for (double& v : dst) v /= n;
  }
  return out;
}

}  // namespace

int frame_shift_offset(int frames, std::uint64_t seed) {
  if (frames < 2) return 0;
  Rng rng(derive_seed(seed, 0x73686674));
  return 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(frames - 1)));
}

VideoClip frame_shift(const VideoClip& clip, int offset) {
  const int n = clip.frames();
  VideoClip out(clip.shape(), clip.colorspace(), clip.frame_rate());
  for (int t = 0; t < n; ++t) copy_frame(clip, (((t - offset) % n) + n) % n, out, t);
  return out;
}

// ---------------------------------------------------------------- spatial / color

namespace {

VideoClip apply_crop(const VideoClip& rgb, double ratio, std::uint64_t seed) {
  const int bw = std::clamp(static_cast<int>(std::lround(ratio * rgb.width())), 1, rgb.width());
  const int bh = std::clamp(static_cast<int>(std::lround(ratio * rgb.height())), 1, rgb.height());
  Rng rng(derive_seed(seed, 0x63726f70));
  const int x0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(rgb.width() - bw + 1)));
  const int y0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(rgb.height() - bh + 1)));
  VideoClip out(rgb.shape(), ColorSpace::RGB, rgb.frame_rate());
  for (int t = 0; t < rgb.frames(); ++t)
    for (int y = y0; y < y0 + bh; ++y)
      for (int x = x0; x < x0 + bw; ++x)
        for (int c = 0; c < 3; ++c) out.at(t, y, x, c) = rgb.at(t, y, x, c);
  return out;
}

VideoClip apply_noise(const VideoClip& rgb, double stddev, std::uint64_t seed) {
  VideoClip out = rgb;
  if (stddev == 0.0) return out;
  Rng rng(derive_seed(seed, 0x6e6f6973));
  for (double& s : out.samples()) s += stddev * rng.normal();
  return out;
}

VideoClip apply_hue(const VideoClip& rgb, double strength, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x68756520));
  const double angle = rng.uniform(-strength * 90.0, strength * 90.0);
  VideoClip out = rgb;
  auto s = out.samples();
  for (std::size_t i = 0; i + 2 < s.size(); i += 3) {
    Hsv hsv = rgb_to_hsv({s[i], s[i + 1], s[i + 2]});
    hsv.h += angle;
    const Rgb p = hsv_to_rgb(hsv);
    s[i] = p.r;
    s[i + 1] = p.g;
    s[i + 2] = p.b;
  }
  return out;
}

}  // namespace

VideoClip saturate(const VideoClip& clip, double factor) {
  VideoClip out = convert_colorspace(clip, ColorSpace::RGB);
  auto s = out.samples();
  for (std::size_t i = 0; i + 2 < s.size(); i += 3) {
    const double gray = rgb_luma(s[i], s[i + 1], s[i + 2]);
    for (int c = 0; c < 3; ++c) s[i + c] = gray + factor * (s[i + c] - gray);
  }
  out.clamp();
  return convert_colorspace(out, clip.colorspace());
}

std::vector<double> gaussian_kernel(double sigma, int size) {
  std::vector<double> k(size);
  const int half = size / 2;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - half;
    k[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

double jpeg_quant_scale(int quality) {
  quality = std::clamp(quality, 1, 100);
  return quality < 50 ? 5000.0 / quality : 200.0 - 2.0 * quality;
}

namespace {

// Serialized: FFTW's planner is not thread-safe.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

VideoClip apply_freq_truncate(const VideoClip& clip, double fraction) {
  const int nt = clip.frames(), ny = clip.height(), nx = clip.width();
  const std::size_t n = clip.shape().pixels_per_frame() * nt;
  fftw_complex* buf = fftw_alloc_complex(n);
  fftw_plan fwd, inv;
  {
    std::lock_guard lock(fftw_mutex());
    fwd = fftw_plan_dft_3d(nt, ny, nx, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    inv = fftw_plan_dft_3d(nt, ny, nx, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  auto keep_axis = [fraction](int k, int len) {
    const int f = k <= len / 2 ? k : k - len;
    return std::abs(f) <= fraction * len / 2.0 + 1e-9;
  };
  std::vector<char> kt(nt), ky(ny), kx(nx);
  for (int i = 0; i < nt; ++i) kt[i] = keep_axis(i, nt);
  for (int i = 0; i < ny; ++i) ky[i] = keep_axis(i, ny);
  for (int i = 0; i < nx; ++i) kx[i] = keep_axis(i, nx);

  VideoClip out = clip;
  auto samples = out.samples();
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      buf[i][0] = samples[3 * i + c];
      buf[i][1] = 0.0;
    }
    fftw_execute(fwd);
    for (int t = 0; t < nt; ++t)
      for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
          if (kt[t] && ky[y] && kx[x]) continue;
          const std::size_t i = (static_cast<std::size_t>(t) * ny + y) * nx + x;
          buf[i][0] = buf[i][1] = 0.0;
        }
    fftw_execute(inv);
    for (std::size_t i = 0; i < n; ++i) samples[3 * i + c] = buf[i][0] / static_cast<double>(n);
  }
  {
    std::lock_guard lock(fftw_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(buf);
  return out;
}

template <typename Fn>
VideoClip in_rgb(const VideoClip& clip, Fn&& fn) {
  if (clip.colorspace() == ColorSpace::RGB) return fn(clip);
  return convert_colorspace(fn(convert_colorspace(clip, ColorSpace::RGB)), clip.colorspace());
}

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

}  // namespace

CodecConfig CodecConfig::from_environment() {
  CodecConfig config;
  if (const char* cmd = std::getenv("VIDMARK_CODEC_CMD"); cmd && *cmd) config.command = cmd;
  return config;
}

bool codec_available(const CodecConfig& config) {
  std::istringstream tokens(config.command);
  std::string exe;
  tokens >> exe;
  if (exe.empty()) return false;
  if (exe.find('/') != std::string::npos) return ::access(exe.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::istringstream dirs(path);
  for (std::string dir; std::getline(dirs, dir, ':');) {
    if (dir.empty()) continue;
    const fs::path candidate = fs::path(dir) / exe;
    if (::access(candidate.c_str(), X_OK) == 0) return true;
  }
  return false;
}

VideoClip external_codec(const VideoClip& clip, int crf, const CodecConfig& config) {
  if (!codec_available(config)) {
    throw Error(Errc::CodecUnavailable, "encoder not found for command: " + config.command);
  }
  static std::atomic<std::uint64_t> counter{0};
  const fs::path work = fs::temp_directory_path() /
                        ("vidmark-codec-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::create_directories(work);
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{work};

  const fs::path in = work / "in.y4m";
  const fs::path out = work / "out.y4m";
  save_clip(clip, in, VideoFormat::Y4M);
  std::string cmd = substitute(config.command, "{in}", in.string());
  cmd = substitute(cmd, "{out}", out.string());
  cmd = substitute(cmd, "{crf}", std::to_string(crf));
  cmd = substitute(cmd, "{work}", work.string());
  const int status = std::system(cmd.c_str());
  if (status != 0) throw Error(Errc::CodecFailure, "codec command exited with status " + std::to_string(status));
  if (!fs::exists(out)) throw Error(Errc::CodecFailure, "codec produced no output");
  VideoClip decoded = load_clip(out, VideoFormat::Y4M);
  if (decoded.shape() != clip.shape()) {
    throw Error(Errc::DimensionMismatch, "codec output " + to_string(decoded.shape()) + " differs from input " +
                                             to_string(clip.shape()));
  }
  decoded = convert_colorspace(decoded, clip.colorspace());
  decoded.set_frame_rate(clip.frame_rate());
  decoded.clamp();
  return decoded;
}

VideoClip apply(const VideoClip& clip, const DistortionSpec& spec, const CodecConfig* codec) {
  validate(spec);
  const std::uint64_t seed = spec.seed;
  VideoClip out = std::visit(
      Overloaded{
          [&](const attack::Identity&) { return clip; },
          [&](const attack::FrameDrop& a) { return apply_frame_drop(clip, a.p, seed); },
          [&](const attack::FrameSwap& a) { return apply_frame_swap(clip, a.p, seed); },
          [&](const attack::FrameAverage& a) { return apply_frame_average(clip, a.n); },
          [&](const attack::FrameShift&) { return frame_shift(clip, frame_shift_offset(clip.frames(), seed)); },
          [&](const attack::Crop& a) { return in_rgb(clip, [&](const VideoClip& c) { return apply_crop(c, a.ratio, seed); }); },
          [&](const attack::GaussianBlur3D& a) {
            const auto kt = gaussian_kernel(a.sigma, a.temporal_kernel);
            const auto ks = gaussian_kernel(a.sigma, a.spatial_kernel);
            return kernels::gaussian_blur3d(clip, kt, ks);
          },
          [&](const attack::GaussianNoise& a) {
            return in_rgb(clip, [&](const VideoClip& c) { return apply_noise(c, a.stddev, seed); });
          },
          [&](const attack::Hue& a) { return in_rgb(clip, [&](const VideoClip& c) { return apply_hue(c, a.strength, seed); }); },
          [&](const attack::Saturation& a) {
            Rng rng(derive_seed(seed, 0x73617475));
            return saturate(clip, rng.uniform(a.lo, a.hi));
          },
          [&](const attack::JpegProxy& a) { return kernels::jpeg_roundtrip(clip, a.quality); },
          [&](const attack::FreqTruncate& a) { return apply_freq_truncate(clip, a.fraction); },
          [&](const attack::ExternalCodec& a) {
            const CodecConfig config = codec ? *codec : CodecConfig::from_environment();
            if (!config.strict && !codec_available(config)) return clip;
            return external_codec(clip, a.crf, config);
          },
      },
      spec.attack);
  out.clamp();
  return out;
}

std::size_t sample_index(std::size_t pool_size, std::uint64_t seed) {
  if (pool_size == 0) throw Error(Errc::EmptyPool, "distortion pool is empty");
  Rng rng(derive_seed(seed, 0x706f6f6c));
  return static_cast<std::size_t>(rng.below(pool_size));
}

DistortionSpec sample_random(const std::vector<DistortionSpec>& pool, std::uint64_t seed) {
  DistortionSpec chosen = pool.at(sample_index(pool.size(), seed));
  chosen.seed = derive_seed(seed, 0x61747461);
  return chosen;
}

std::vector<DistortionSpec> default_attack_pool() {
  return {
      {attack::FrameDrop{0.5}, 0},   {attack::FrameSwap{0.5}, 0}, {attack::FrameShift{}, 0},
      {attack::Crop{0.5}, 0},        {attack::Hue{1.0}, 0},       {attack::Saturation{0.5, 1.5}, 0},
      {attack::GaussianBlur3D{}, 0}, {attack::GaussianNoise{0.05}, 0}, {attack::JpegProxy{50}, 0},
      {attack::FreqTruncate{0.5}, 0},
  };
}

}  // namespace vidmark
