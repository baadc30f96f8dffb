#include "vidmark/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "vidmark/distortion.hpp"
#include "vidmark/error.hpp"

namespace vidmark::reference {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Gather a line, transform it, scatter it back.
template <typename Get, typename Set>
void haar_line(int n, bool forward, Get get, Set set, std::vector<double>& buf) {
  buf.resize(n);
  for (int i = 0; i < n; ++i) buf[i] = get(i);
  const int half = n / 2;
  for (int i = 0; i < half; ++i) {
    if (forward) {
      set(i, (buf[2 * i] + buf[2 * i + 1]) * kInvSqrt2);
      set(half + i, (buf[2 * i] - buf[2 * i + 1]) * kInvSqrt2);
    } else {
      set(2 * i, (buf[i] + buf[half + i]) * kInvSqrt2);
      set(2 * i + 1, (buf[i] - buf[half + i]) * kInvSqrt2);
    }
  }
}

void level_pass(Volume& v, int nt, int ny, int nx, bool forward) {
  std::vector<double> buf;
  auto along_t = [&] {
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x)
        haar_line(nt, forward, [&](int i) { return v(i, y, x); }, [&](int i, double s) { v(i, y, x) = s; }, buf);
  };
  auto along_v = [&] {
    for (int t = 0; t < nt; ++t)
      for (int x = 0; x < nx; ++x)
        haar_line(ny, forward, [&](int i) { return v(t, i, x); }, [&](int i, double s) { v(t, i, x) = s; }, buf);
  };
  auto along_h = [&] {
    for (int t = 0; t < nt; ++t)
      for (int y = 0; y < ny; ++y)
        haar_line(nx, forward, [&](int i) { return v(t, y, i); }, [&](int i, double s) { v(t, y, i) = s; }, buf);
  };
  if (forward) {
    along_t();
    along_v();
    along_h();
  } else {
    along_h();
    along_v();
    along_t();
  }
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

}  // namespace

WaveletPyramid dwt3_forward(const Volume& signal, int levels) {
  const int block = 1 << levels;
  if (signal.frames() < block || signal.height() < block || signal.width() < block) {
    throw Error(Errc::BadShape, "axis shorter than 2^levels");
  }
  const int pt = padded_extent(signal.frames(), levels);
  const int py = padded_extent(signal.height(), levels);
  const int px = padded_extent(signal.width(), levels);
  Volume v = pad_edge(signal, pt, py, px);
  for (int level = 0; level < levels; ++level) level_pass(v, pt >> level, py >> level, px >> level, true);
  return WaveletPyramid(std::move(v), levels, signal.frames(), signal.height(), signal.width());
}

Volume dwt3_inverse(const WaveletPyramid& pyramid) {
  Volume v = pyramid.coefficients();
  for (int level = pyramid.levels() - 1; level >= 0; --level) {
    level_pass(v, pyramid.frames() >> level, pyramid.height() >> level, pyramid.width() >> level, false);
  }
  return crop_volume(v, pyramid.original_frames(), pyramid.original_height(), pyramid.original_width());
}

VideoClip gaussian_blur3d(const VideoClip& clip, std::span<const double> temporal, std::span<const double> spatial) {
  const int ht = static_cast<int>(temporal.size()) / 2;
  const int hs = static_cast<int>(spatial.size()) / 2;
  VideoClip out(clip.shape(), clip.colorspace(), clip.frame_rate());
  for (int t = 0; t < clip.frames(); ++t)
    for (int y = 0; y < clip.height(); ++y)
      for (int x = 0; x < clip.width(); ++x)
        for (int c = 0; c < 3; ++c) {
          double acc = 0.0;
          for (int dt = -ht; dt <= ht; ++dt)
            for (int dy = -hs; dy <= hs; ++dy)
              for (int dx = -hs; dx <= hs; ++dx) {
                acc += temporal[dt + ht] * spatial[dy + hs] * spatial[dx + hs] *
                       clip.at(reflect_index(t + dt, clip.frames()), reflect_index(y + dy, clip.height()),
                               reflect_index(x + dx, clip.width()), c);
              }
          out.at(t, y, x, c) = acc;
        }
  return out;
}

VideoClip jpeg_roundtrip(const VideoClip& clip, int quality) {
  static constexpr std::array<int, 64> luma = {
      16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,  14, 13, 16, 24, 40,  57,
      69, 56, 14, 17, 22,  29,  51,  87,  80, 62, 18, 22, 37,  56,  68,  109, 103, 77, 24, 35, 55,  64,
      81, 104, 113, 92, 49, 64, 78,  87,  103, 121, 120, 101, 72, 92, 95,  98,  112, 100, 103, 99};
  static constexpr std::array<int, 64> chroma = {
      17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99, 24, 26, 56, 99, 99, 99,
      99, 99, 47, 66, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
      99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};
  const double scale = jpeg_quant_scale(quality);
  auto alpha = [](int u) { return u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0); };
  auto cosine = [](int x, int u) { return std::cos((2 * x + 1) * u * std::numbers::pi / 16.0); };

  VideoClip yuv = convert_colorspace(clip, ColorSpace::YUV);
  const int ny = yuv.height(), nx = yuv.width();
  for (int t = 0; t < yuv.frames(); ++t)
    for (int c = 0; c < 3; ++c)
      for (int y0 = 0; y0 < ny; y0 += 8)
        for (int x0 = 0; x0 < nx; x0 += 8) {
          double px[8][8], coef[8][8];
          for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x)
              px[y][x] = yuv.at(t, std::min(y0 + y, ny - 1), std::min(x0 + x, nx - 1), c) * 255.0 - 128.0;
          for (int v = 0; v < 8; ++v)
            for (int u = 0; u < 8; ++u) {
              double s = 0.0;
              for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) s += px[y][x] * cosine(x, u) * cosine(y, v);
              s *= alpha(u) * alpha(v);
              const int base = (c == 0 ? luma : chroma)[v * 8 + u];
              const double q = std::clamp(std::floor((base * scale + 50.0) / 100.0), 1.0, 255.0);
              coef[v][u] = std::round(s / q) * q;
            }
          for (int y = 0; y < 8 && y0 + y < ny; ++y)
            for (int x = 0; x < 8 && x0 + x < nx; ++x) {
              double s = 0.0;
              for (int v = 0; v < 8; ++v)
                for (int u = 0; u < 8; ++u) s += alpha(u) * alpha(v) * coef[v][u] * cosine(x, u) * cosine(y, v);
              yuv.at(t, y0 + y, x0 + x, c) = (s + 128.0) / 255.0;
            }
        }
  return convert_colorspace(yuv, clip.colorspace());
}

double ssim_plane(std::span<const double> a, std::span<const double> b, int height, int width) {
  constexpr int k = 11;
  const auto g = gaussian_kernel(1.5, k);
  constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  double total = 0.0;
  int windows = 0;
  for (int y0 = 0; y0 + k <= height; ++y0)
    for (int x0 = 0; x0 + k <= width; ++x0) {
      double mx = 0, my = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double w = g[i] * g[j];
          mx += w * a[static_cast<std::size_t>(y0 + i) * width + x0 + j];
          my += w * b[static_cast<std::size_t>(y0 + i) * width + x0 + j];
        }
      double vx = 0, vy = 0, cov = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double w = g[i] * g[j];
          const double da = a[static_cast<std::size_t>(y0 + i) * width + x0 + j] - mx;
          const double db = b[static_cast<std::size_t>(y0 + i) * width + x0 + j] - my;
          vx += w * da * da;
          vy += w * db * db;
          cov += w * da * db;
        }
      total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++windows;
    }
  return total / windows;
}

double ssim_volume(const Volume& a, const Volume& b) {
  const std::size_t plane = static_cast<std::size_t>(a.height()) * a.width();
  double sum = 0.0;
  for (int t = 0; t < a.frames(); ++t) {
    sum += ssim_plane(a.data().subspan(t * plane, plane), b.data().subspan(t * plane, plane), a.height(), a.width());
  }
  return sum / a.frames();
}

}  // namespace vidmark::reference
